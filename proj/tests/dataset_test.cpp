#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <zlib.h>

#include "cim/dataset.hpp"
#include "cim/edge_list.hpp"
#include "cim/types.hpp"

using namespace cim;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() / ("cim_dataset_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string file_url(const fs::path& p) { return "file://" + fs::absolute(p).string(); }

void put16(std::string& s, std::uint32_t v) {
  s += static_cast<char>(v & 0xff);
  s += static_cast<char>((v >> 8) & 0xff);
}
void put32(std::string& s, std::uint32_t v) {
  put16(s, v & 0xffff);
  put16(s, v >> 16);
}

// Single-entry zip archive; method 0 stores, method 8 deflates.
std::string make_zip(const std::string& name, const std::string& data, int method) {
  std::string payload = data;
  if (method == 8) {
    z_stream zs{};
    deflateInit2(&zs, Z_BEST_COMPRESSION, Z_DEFLATED, -MAX_WBITS, 8, Z_DEFAULT_STRATEGY);
    payload.assign(deflateBound(&zs, static_cast<uLong>(data.size())), '\0');
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
    zs.avail_in = static_cast<uInt>(data.size());
    zs.next_out = reinterpret_cast<Bytef*>(payload.data());
    zs.avail_out = static_cast<uInt>(payload.size());
    deflate(&zs, Z_FINISH);
    payload.resize(zs.total_out);
    deflateEnd(&zs);
  }
  const auto crc = static_cast<std::uint32_t>(crc32(0, reinterpret_cast<const Bytef*>(data.data()), static_cast<uInt>(data.size())));
  std::string z;
  put32(z, 0x04034b50);
  put16(z, 20);
  put16(z, 0);
  put16(z, static_cast<std::uint32_t>(method));
  put32(z, 0);
  put32(z, crc);
  put32(z, static_cast<std::uint32_t>(payload.size()));
  put32(z, static_cast<std::uint32_t>(data.size()));
  put16(z, static_cast<std::uint32_t>(name.size()));
  put16(z, 0);
  z += name;
  z += payload;
  const auto central = static_cast<std::uint32_t>(z.size());
  put32(z, 0x02014b50);
  put16(z, 20);
  put16(z, 20);
  put16(z, 0);
  put16(z, static_cast<std::uint32_t>(method));
  put32(z, 0);
  put32(z, crc);
  put32(z, static_cast<std::uint32_t>(payload.size()));
  put32(z, static_cast<std::uint32_t>(data.size()));
  put16(z, static_cast<std::uint32_t>(name.size()));
  put16(z, 0);
  put16(z, 0);
  put16(z, 0);
  put16(z, 0);
  put32(z, 0);
  put32(z, 0);
  z += name;
  const auto central_size = static_cast<std::uint32_t>(z.size()) - central;
  put32(z, 0x06054b50);
  put16(z, 0);
  put16(z, 0);
  put16(z, 1);
  put16(z, 1);
  put32(z, central_size);
  put32(z, central);
  put16(z, 0);
  return z;
}

}  // namespace

TEST_CASE("normalize_edge_text") {
  CHECK(normalize_edge_text("node_1,node_2\r\n0,1\r\n1,2\r\n") == "# node_1 node_2\n0 1\n1 2\n");
  CHECK(normalize_edge_text("# c\n0\t1\n") == "# c\n0\t1\n");
  CHECK(normalize_edge_text("") == "");
}

TEST_CASE("dataset sources") {
  auto deezer = builtin_dataset("deezer");
  REQUIRE(deezer.has_value());
  CHECK(deezer->format == ArchiveFormat::Zip);
  CHECK(builtin_dataset("dblp")->format == ArchiveFormat::Gzip);
  CHECK_FALSE(builtin_dataset("nope").has_value());
  auto src = dataset_from_url("https://example.org/data/com-lj.ungraph.txt.gz");
  CHECK(src.name == "com-lj");
  CHECK(src.format == ArchiveFormat::Gzip);
  CHECK_THROWS_AS(dataset_from_url("https://example.org/a.zip"), Error);
}

TEST_CASE("fetch a plain file url and reuse the cache") {
  TempDir src, cache;
  const fs::path edges = src.path / "toy.txt";
  write_text(edges, "0 1\n1 2\n");
  FetchOptions opt{cache.path.string(), false, ""};
  const std::string path = fetch_dataset(file_url(edges), opt);
  CHECK(fs::path(path) == cache.path / "toy.edges");
  CHECK(parse_edge_list(read_text(path)).node_count() == 3);
  CHECK(read_text(cache.path / "checksums.txt") == "toy " + sha256_file(edges.string()) + "\n");

  // Source gone: the cached copy is returned without any download.
  fs::remove(edges);
  CHECK(fetch_dataset(file_url(edges), opt) == path);
  opt.offline = true;
  CHECK(fetch_dataset(file_url(edges), opt) == path);
}

TEST_CASE("fetch decodes gzip") {
  TempDir src, cache;
  const fs::path gz = src.path / "graph.txt.gz";
  gzFile f = gzopen(gz.c_str(), "wb");
  const std::string text = "# SNAP style\n1\t2\n2\t3\n3\t1\n";
  gzwrite(f, text.data(), static_cast<unsigned>(text.size()));
  gzclose(f);
  const std::string path = fetch_dataset(file_url(gz), {cache.path.string(), false, ""});
  CHECK(read_text(path) == text);
}

TEST_CASE("zip members are extracted and CSV is normalized") {
  const std::string csv = "node_1,node_2\n0,1\n1,2\n2,0\n";
  for (int method : {0, 8}) {
    TempDir src, cache;
    const fs::path zip = src.path / "deezer_europe.zip";
    write_text(zip, make_zip("deezer_europe/deezer_europe_edges.csv", csv, method));
    DatasetSource local = *builtin_dataset("deezer");
    local.url = file_url(zip);
    const std::string path = fetch_source(local, {cache.path.string(), false, ""});
    CHECK(fs::path(path) == cache.path / "deezer.edges");
    CHECK(read_text(path) == "# node_1 node_2\n0 1\n1 2\n2 0\n");
    CHECK(parse_edge_list(read_text(path)).edge_count() == 6);

    local.member = "other.csv";
    fs::remove(path);
    CHECK_THROWS_WITH_AS(fetch_source(local, {cache.path.string(), false, ""}), doctest::Contains("no entry"), Error);
    CHECK_FALSE(fs::exists(path));
  }
}

TEST_CASE("checksum mismatch leaves the cache untouched") {
  TempDir src, cache;
  const fs::path edges = src.path / "toy.txt";
  write_text(edges, "0 1\n");
  FetchOptions opt{cache.path.string(), false, std::string(64, '0')};
  CHECK_THROWS_WITH_AS(fetch_dataset(file_url(edges), opt), doctest::Contains("checksum mismatch"), Error);
  CHECK_FALSE(fs::exists(cache.path / "toy.edges"));
  CHECK_FALSE(fs::exists(cache.path / ".toy.download"));
  CHECK_FALSE(fs::exists(cache.path / "checksums.txt"));

  opt.expected_sha256 = sha256_file(edges.string());
  CHECK_NOTHROW(fetch_dataset(file_url(edges), opt));
}

TEST_CASE("recorded checksums are enforced on re-download") {
  TempDir src, cache;
  const fs::path edges = src.path / "toy.txt";
  write_text(edges, "0 1\n");
  FetchOptions opt{cache.path.string(), false, ""};
  fetch_dataset(file_url(edges), opt);
  fs::remove(cache.path / "toy.edges");
  write_text(edges, "0 2\n");
  CHECK_THROWS_AS(fetch_dataset(file_url(edges), opt), Error);
  CHECK_FALSE(fs::exists(cache.path / "toy.edges"));
}

TEST_CASE("offline mode without a cached file is an error") {
  TempDir cache;
  FetchOptions opt{cache.path.string(), true, ""};
  CHECK_THROWS_WITH_AS(fetch_dataset("deezer", opt), doctest::Contains("offline"), Error);
  CHECK_THROWS_AS(fetch_dataset("not-a-dataset", opt), Error);
}

TEST_CASE("missing source is reported") {
  TempDir cache;
  FetchOptions opt{cache.path.string(), false, ""};
  CHECK_THROWS_AS(fetch_dataset("file:///nonexistent/cim/none.txt", opt), Error);
  CHECK_FALSE(fs::exists(cache.path / "none.edges"));
}
