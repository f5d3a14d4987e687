#include "cim/dataset.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <curl/curl.h>
#include <openssl/evp.h>
#include <zlib.h>

#include "cim/types.hpp"

namespace fs = std::filesystem;

namespace cim {
namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path.string() + "'");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const fs::path& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !out.write(data.data(), static_cast<std::streamsize>(data.size()))) {
    throw Error("cannot write '" + path.string() + "'");
  }
}

void download(const std::string& url, const fs::path& dest) {
  static const bool init = [] { return curl_global_init(CURL_GLOBAL_DEFAULT) == CURLE_OK; }();
  if (!init) throw Error("curl initialization failed");

  std::FILE* file = std::fopen(dest.c_str(), "wb");
  if (file == nullptr) throw Error("cannot write '" + dest.string() + "'");
  CURL* curl = curl_easy_init();
  if (curl == nullptr) {
    std::fclose(file);
    throw Error("curl_easy_init failed");
  }
  char errbuf[CURL_ERROR_SIZE] = {0};
  curl_easy_setopt(curl, CURLOPT_URL, url.c_str());
  curl_easy_setopt(curl, CURLOPT_WRITEDATA, file);
  curl_easy_setopt(curl, CURLOPT_FOLLOWLOCATION, 1L);
  curl_easy_setopt(curl, CURLOPT_FAILONERROR, 1L);
  curl_easy_setopt(curl, CURLOPT_CONNECTTIMEOUT, 30L);
  curl_easy_setopt(curl, CURLOPT_ERRORBUFFER, errbuf);
  CURLcode rc = curl_easy_perform(curl);
  curl_easy_cleanup(curl);
  std::fclose(file);
  if (rc != CURLE_OK) {
    std::error_code ec;
    fs::remove(dest, ec);
    throw Error("download of " + url + " failed: " + (errbuf[0] ? errbuf : curl_easy_strerror(rc)));
  }
}

std::string gunzip(const fs::path& path) {
  gzFile gz = gzopen(path.c_str(), "rb");
  if (gz == nullptr) throw Error("cannot open gzip '" + path.string() + "'");
  std::string out;
  char buf[1 << 16];
  int n = 0;
  while ((n = gzread(gz, buf, sizeof buf)) > 0) out.append(buf, static_cast<std::size_t>(n));
  int err = 0;
  const char* msg = gzerror(gz, &err);
  gzclose(gz);
  if (n < 0 || (err != Z_OK && err != Z_STREAM_END)) throw Error(std::string("gzip decode failed: ") + msg);
  return out;
}

std::uint32_t le16(const std::string& d, std::size_t at) {
  return static_cast<unsigned char>(d[at]) | static_cast<unsigned char>(d[at + 1]) << 8;
}
std::uint32_t le32(const std::string& d, std::size_t at) {
  return le16(d, at) | le16(d, at + 2) << 16;
}

std::string inflate_raw(const char* data, std::size_t size, std::size_t expected) {
  std::string out(expected, '\0');
  z_stream zs{};
  if (inflateInit2(&zs, -MAX_WBITS) != Z_OK) throw Error("inflateInit2 failed");
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data));
  zs.avail_in = static_cast<uInt>(size);
  zs.next_out = reinterpret_cast<Bytef*>(out.data());
  zs.avail_out = static_cast<uInt>(out.size());
  int rc = inflate(&zs, Z_FINISH);
  inflateEnd(&zs);
  if (rc != Z_STREAM_END || zs.total_out != expected) throw Error("zip entry failed to inflate");
  return out;
}

// Minimal zip reader: locates `member` through the central directory.
std::string unzip_member(const fs::path& path, const std::string& member) {
  const std::string d = read_file(path);
  constexpr std::uint32_t kEnd = 0x06054b50, kCentral = 0x02014b50, kLocal = 0x04034b50;
  if (d.size() < 22) throw Error("'" + path.string() + "' is not a zip archive");
  std::size_t eocd = std::string::npos;
  for (std::size_t i = d.size() - 22 + 1; i-- > 0 && d.size() - i <= 22 + 65535;) {
    if (le32(d, i) == kEnd) {
      eocd = i;
      break;
    }
  }
  if (eocd == std::string::npos) throw Error("'" + path.string() + "' is not a zip archive");
  const std::size_t entries = le16(d, eocd + 10);
  std::size_t at = le32(d, eocd + 16);
  for (std::size_t e = 0; e < entries; ++e) {
    if (at + 46 > d.size() || le32(d, at) != kCentral) throw Error("corrupt zip central directory");
    const std::uint32_t method = le16(d, at + 10);
    const std::size_t comp = le32(d, at + 20), plain = le32(d, at + 24);
    const std::size_t name_len = le16(d, at + 28), extra_len = le16(d, at + 30), comment_len = le16(d, at + 32);
    const std::size_t local = le32(d, at + 42);
    const std::string name = d.substr(at + 46, name_len);
    at += 46 + name_len + extra_len + comment_len;
    if (name != member) continue;

    if (local + 30 > d.size() || le32(d, local) != kLocal) throw Error("corrupt zip local header");
    const std::size_t data_at = local + 30 + le16(d, local + 26) + le16(d, local + 28);
    if (data_at + comp > d.size()) throw Error("truncated zip entry");
    if (method == 0) return d.substr(data_at, comp);
    if (method == 8) return inflate_raw(d.data() + data_at, comp, plain);
    throw Error("unsupported zip compression method " + std::to_string(method));
  }
  throw Error("zip archive has no entry '" + member + "'");
}

fs::path checksum_file(const fs::path& dir) { return dir / "checksums.txt"; }

std::map<std::string, std::string> read_checksums(const fs::path& dir) {
  std::map<std::string, std::string> out;
  std::ifstream in(checksum_file(dir));
  std::string name, hash;
  while (in >> name >> hash) out[name] = hash;
  return out;
}

void record_checksum(const fs::path& dir, const std::string& name, const std::string& hash) {
  std::ofstream out(checksum_file(dir), std::ios::app);
  out << name << ' ' << hash << '\n';
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

std::optional<DatasetSource> builtin_dataset(const std::string& name) {
  if (name == "deezer") {
    return DatasetSource{"deezer", "https://snap.stanford.edu/data/deezer_europe.zip", ArchiveFormat::Zip,
                         "deezer_europe/deezer_europe_edges.csv", ""};
  }
  if (name == "dblp") {
    return DatasetSource{"dblp", "https://snap.stanford.edu/data/bigdata/communities/com-dblp.ungraph.txt.gz",
                         ArchiveFormat::Gzip, "", ""};
  }
  if (name == "amazon") {
    return DatasetSource{"amazon", "https://snap.stanford.edu/data/bigdata/communities/com-amazon.ungraph.txt.gz",
                         ArchiveFormat::Gzip, "", ""};
  }
  return std::nullopt;
}

std::vector<std::string> builtin_dataset_names() { return {"deezer", "dblp", "amazon"}; }

DatasetSource dataset_from_url(const std::string& url) {
  DatasetSource src;
  src.url = url;
  std::string file = url.substr(url.find_last_of('/') + 1);
  file = file.substr(0, file.find_first_of("?#"));
  if (file.empty()) throw Error("cannot derive a dataset name from '" + url + "'");
  if (ends_with(file, ".gz")) {
    src.format = ArchiveFormat::Gzip;
    file.resize(file.size() - 3);
  } else if (ends_with(file, ".zip")) {
    throw Error("zip URLs need a member name; register them as built-in datasets");
  }
  src.name = file.substr(0, file.find('.'));
  return src;
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex += kHex[digest[i] >> 4];
    hex += kHex[digest[i] & 15];
  }
  return hex;
}

std::string normalize_edge_text(const std::string& text) {
  std::istringstream in(text);
  std::string line, out;
  bool seen_data = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    for (char& c : line) {
      if (c == ',') c = ' ';
    }
    const auto first = line.find_first_not_of(" \t");
    if (first != std::string::npos && line[first] != '#' && !seen_data) {
      seen_data = true;
      if (line.find_first_not_of("0123456789-+ \t") != std::string::npos) line = "# " + line;
    }
    out += line;
    out += '\n';
  }
  return out;
}

std::string fetch_dataset(const std::string& name_or_url, const FetchOptions& options) {
  if (auto builtin = builtin_dataset(name_or_url)) return fetch_source(*builtin, options);
  if (name_or_url.find("://") != std::string::npos) return fetch_source(dataset_from_url(name_or_url), options);
  throw Error("unknown dataset '" + name_or_url + "'");
}

std::string fetch_source(const DatasetSource& src, const FetchOptions& options) {
  if (options.cache_dir.empty()) throw Error("no cache directory configured");
  if (src.name.empty()) throw Error("dataset source has no name");
  const fs::path dir(options.cache_dir);
  const fs::path target = dir / (src.name + ".edges");
  if (fs::exists(target)) return target.string();
  if (options.offline) throw Error("dataset '" + src.name + "' is not cached in " + dir.string() + " (offline mode)");

  fs::create_directories(dir);
  const fs::path part = dir / ("." + src.name + ".download");
  download(src.url, part);

  std::string expected = options.expected_sha256;
  if (expected.empty()) expected = src.sha256;
  auto recorded = read_checksums(dir);
  if (expected.empty() && recorded.count(src.name)) expected = recorded[src.name];
  const std::string actual = sha256_file(part.string());
  if (!expected.empty() && actual != expected) {
    fs::remove(part);
    throw Error("checksum mismatch for '" + src.name + "': expected " + expected + ", got " + actual);
  }

  std::string text;
  try {
    switch (src.format) {
      case ArchiveFormat::Plain: text = read_file(part); break;
      case ArchiveFormat::Gzip: text = gunzip(part); break;
      case ArchiveFormat::Zip: text = unzip_member(part, src.member); break;
    }
  } catch (...) {
    fs::remove(part);
    throw;
  }
  fs::remove(part);

  const fs::path staged = dir / ("." + src.name + ".edges.tmp");
  write_file(staged, normalize_edge_text(text));
  fs::rename(staged, target);
  if (!recorded.count(src.name)) record_checksum(dir, src.name, actual);
  return target.string();
}

}  // namespace cim
