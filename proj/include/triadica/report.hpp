#pragma once

#include <string>
#include <vector>

namespace triadica {

enum class Severity { info, warning, error };

std::string to_string(Severity s);

struct Finding {
  Severity severity = Severity::error;
  std::string location;
  std::string message;
  std::vector<std::string> witness;
};

/// Accumulated findings of a report-valued check. A report fails exactly
/// when it holds an error finding.
class Report {
 public:
  void error(std::string location, std::string message, std::vector<std::string> witness = {});
  void warning(std::string location, std::string message, std::vector<std::string> witness = {});
  void info(std::string location, std::string message, std::vector<std::string> witness = {});

  /// Appends other's findings, prefixing their locations.
  void merge(const Report& other, const std::string& prefix = {});

  bool ok() const;
  bool exploratory() const noexcept { return exploratory_; }
  void set_exploratory(bool value) noexcept { exploratory_ = value; }
  /// "pass", "fail" or "exploratory".
  std::string status() const;

  const std::vector<Finding>& findings() const noexcept { return findings_; }
  std::size_t error_count() const;
  /// First error finding; the report must not be ok.
  const Finding& first_error() const;

 private:
  std::vector<Finding> findings_;
  bool exploratory_ = false;
};

}  // namespace triadica
