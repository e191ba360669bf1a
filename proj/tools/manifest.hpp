#pragma once

// Run manifests and atomic file output for the ptx command-line tool.

#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace ptx::cli {

inline constexpr const char* kToolVersion = "1.0.0";

inline std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return os.str();
}

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Writes via a sibling temp file and rename so readers never see a partial file.
inline void write_atomic(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << contents;
    if (!out) throw std::runtime_error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

class Manifest {
 public:
  Manifest(std::string command, std::vector<std::string> argv) : started_(utc_timestamp()) {
    doc_["tool"] = "ptx";
    doc_["version"] = kToolVersion;
    doc_["command"] = std::move(command);
    doc_["argv"] = std::move(argv);
    doc_["outputs"] = nlohmann::ordered_json::array();
  }

  void set(const std::string& key, nlohmann::ordered_json value) { doc_[key] = std::move(value); }

  // Writes `contents` to `path` and records it with its digest.
  void emit(const std::filesystem::path& path, const std::string& contents) {
    write_atomic(path, contents);
    nlohmann::ordered_json entry;
    entry["path"] = path.filename().string();
    entry["bytes"] = contents.size();
    entry["sha256"] = sha256_hex(contents);
    doc_["outputs"].push_back(std::move(entry));
  }

  void finish(const std::filesystem::path& path) {
    doc_["started"] = started_;
    doc_["finished"] = utc_timestamp();
    write_atomic(path, doc_.dump(2) + "\n");
  }

 private:
  std::string started_;
  nlohmann::ordered_json doc_;
};

}  // namespace ptx::cli
