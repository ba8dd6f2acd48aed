#ifndef RICN_REPORT_HPP
#define RICN_REPORT_HPP

#include <string>
#include <vector>

#include "ricn/base.hpp"

namespace ricn {

/// Minimal streaming JSON writer with deterministic output: fields appear
/// in insertion order and every floating-point number is rendered with 17
/// significant digits, so identical inputs produce byte-identical reports.
class JsonWriter {
public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(const std::string& name);
  JsonWriter& value(double v);
  JsonWriter& value(int v);
  JsonWriter& value(long v);
  JsonWriter& value(bool v);
  JsonWriter& value(const std::string& v);
  JsonWriter& value(const char* v);
  JsonWriter& null();

  /// key(...) followed by value(...).
  template <typename T>
  JsonWriter& field(const std::string& name, const T& v) {
    key(name);
    return value(v);
  }

  JsonWriter& value_array(const std::vector<double>& xs);

  const std::string& str() const { return out_; }

private:
  void separator();
  std::string out_;
  std::vector<bool> needs_comma_;
  bool pending_key_ = false;
};

/// CSV emitter: header row then data rows; numbers share the JSON writer's
/// 17-significant-digit formatting.
class CsvWriter {
public:
  explicit CsvWriter(std::vector<std::string> header);
  void row(const std::vector<std::string>& cells);
  void row_numeric(const std::vector<double>& cells);
  const std::string& str() const { return out_; }

private:
  std::string out_;
  std::size_t columns_;
};

std::string json_escape(const std::string& s);

} // namespace ricn

#endif
