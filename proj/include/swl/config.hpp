#ifndef SWL_CONFIG_HPP
#define SWL_CONFIG_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "swl/common.hpp"

namespace swl {

// Flat key-value configuration with dotted sections (kernel.family, ...).
// Parsing and emission round-trip exactly: parse(emit(parse(s))) == parse(s).
class Config {
 public:
  static Config parse_text(const std::string& text);
  static Config load(const std::string& path);
  std::string emit() const;  // canonical form: sorted keys, "key = value"

  bool has(const std::string& key) const;
  void set(const std::string& key, const std::string& value);

  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& dflt) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double dflt) const;
  int get_int(const std::string& key) const;
  int get_int(const std::string& key, int dflt) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t dflt) const;
  std::vector<double> get_double_list(const std::string& key) const;
  std::vector<double> get_double_list(const std::string& key,
                                      const std::vector<double>& dflt) const;

  const std::map<std::string, std::string>& entries() const { return kv_; }
  bool operator==(const Config& other) const { return kv_ == other.kv_; }

  // FNV-1a hash of the canonical emission; stable across platforms.
  std::string hash() const;

 private:
  std::map<std::string, std::string> kv_;
};

}  // namespace swl

#endif
