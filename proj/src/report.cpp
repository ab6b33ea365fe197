#include "triadica/report.hpp"

#include <algorithm>
#include <stdexcept>

namespace triadica {

std::string to_string(Severity s) {
  switch (s) {
    case Severity::info:
      return "info";
    case Severity::warning:
      return "warning";
    case Severity::error:
      return "error";
  }
  return "error";
}

void Report::error(std::string location, std::string message, std::vector<std::string> witness) {
  findings_.push_back({Severity::error, std::move(location), std::move(message), std::move(witness)});
}

void Report::warning(std::string location, std::string message, std::vector<std::string> witness) {
  findings_.push_back({Severity::warning, std::move(location), std::move(message), std::move(witness)});
}

void Report::info(std::string location, std::string message, std::vector<std::string> witness) {
  findings_.push_back({Severity::info, std::move(location), std::move(message), std::move(witness)});
}

void Report::merge(const Report& other, const std::string& prefix) {
  for (auto f : other.findings_) {
    if (!prefix.empty()) f.location = f.location.empty() ? prefix : prefix + "/" + f.location;
    findings_.push_back(std::move(f));
  }
  exploratory_ = exploratory_ || other.exploratory_;
}

bool Report::ok() const { return error_count() == 0; }

std::string Report::status() const {
  if (!ok()) return "fail";
  return exploratory_ ? "exploratory" : "pass";
}

std::size_t Report::error_count() const {
  return static_cast<std::size_t>(std::count_if(findings_.begin(), findings_.end(),
                                                [](const Finding& f) { return f.severity == Severity::error; }));
}

const Finding& Report::first_error() const {
  for (const auto& f : findings_) {
    if (f.severity == Severity::error) return f;
  }
  throw std::logic_error("report has no error finding");
}

}  // namespace triadica
