// manifest.hpp
// Run manifest emitted next to every command output: the command, tool
// version, every resolved configuration value with its provenance (default
// or flag), and FNV-1a digests of the input files. Enough to reproduce the
// run exactly.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rankins/tsv.hpp"
#include "rankins/version.hpp"

namespace rankins {

class RunManifest {
 public:
  explicit RunManifest(std::string command) : command_(std::move(command)) {}

  void add_config(const std::string& key, const std::string& value,
                  bool from_flag) {
    config_.push_back({key, value, from_flag ? "flag" : "default"});
  }

  void add_input(const std::string& path) {
    inputs_.push_back({path, file_digest(path)});
  }

  // Four columns: [kind, key, value, provenance].
  void write(const std::string& path) const {
    TsvWriter w(path);
    w.row({"meta", "command", command_, ""});
    w.row({"meta", "version", kVersion, ""});
    for (const auto& e : config_) {
      w.row({"config", e.key, e.value, e.provenance});
    }
    for (const auto& in : inputs_) {
      w.row({"input", in.path, in.digest, ""});
    }
  }

 private:
  struct ConfigEntry {
    std::string key;
    std::string value;
    std::string provenance;
  };
  struct InputEntry {
    std::string path;
    std::string digest;
  };

  std::string command_;
  std::vector<ConfigEntry> config_;
  std::vector<InputEntry> inputs_;
};

}  // namespace rankins
