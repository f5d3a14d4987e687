#pragma once

#include <optional>
#include <string>
#include <vector>

namespace cim {

enum class ArchiveFormat { Plain, Gzip, Zip };

struct DatasetSource {
  std::string name;
  std::string url;
  ArchiveFormat format = ArchiveFormat::Plain;
  /// Entry to extract from a zip archive.
  std::string member;
  /// Pinned SHA-256 of the downloaded file (lowercase hex); empty = unpinned.
  std::string sha256;
};

/// Built-in SNAP sources: deezer, dblp, amazon.
std::optional<DatasetSource> builtin_dataset(const std::string& name);
std::vector<std::string> builtin_dataset_names();

/// Source for an arbitrary URL; name and format come from the file name.
DatasetSource dataset_from_url(const std::string& url);

struct FetchOptions {
  std::string cache_dir;
  bool offline = false;
  /// Overrides the pinned or recorded checksum when non-empty.
  std::string expected_sha256;
};

/// Returns the path of `<cache_dir>/<name>.edges`, a whitespace edge list.
///
/// A cached file is returned without touching the network. Otherwise the
/// source is downloaded to a temporary file and its SHA-256 compared with the
/// expected value (option, pinned value, or the one recorded in
/// `<cache_dir>/checksums.txt` by an earlier download). On mismatch the
/// download is discarded and the cache left as it was. The first download
/// of an unpinned source records its checksum. Archives are unpacked and
/// CSV input is rewritten as whitespace pairs with its header commented out.
std::string fetch_dataset(const std::string& name_or_url, const FetchOptions& options);
/// fetch_dataset for an explicit source.
std::string fetch_source(const DatasetSource& source, const FetchOptions& options);

/// Lowercase hex SHA-256 of a file's contents.
std::string sha256_file(const std::string& path);

/// Turns `a,b` / `a b` lines into `a b`, prefixing a non-numeric header with `#`.
std::string normalize_edge_text(const std::string& text);

}  // namespace cim
