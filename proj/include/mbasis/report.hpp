#pragma once

#include "mbasis/linalg.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mbasis {

/// One index of a per-index product audit.
struct AuditRow {
  int index = 0;
  double norm_x = 0.0;
  double dual_norm_f = 0.0;
  double product = 0.0;
  double defect_row_max = 0.0;
};

/// Measured quantities of one audit. Metrics, checks and findings keep their
/// insertion order so that exported reports are stable.
class AuditReport {
 public:
  AuditReport() = default;
  explicit AuditReport(std::string name) : name_(std::move(name)) {}

  const std::string& name() const { return name_; }

  void set_metric(const std::string& key, double value);
  double metric(const std::string& key) const;
  bool has_metric(const std::string& key) const;
  const std::vector<std::pair<std::string, double>>& metrics() const { return metrics_; }

  void set_check(const std::string& key, bool passed);
  bool check(const std::string& key) const;
  const std::vector<std::pair<std::string, bool>>& checks() const { return checks_; }

  /// A measured discrepancy worth a human reading it.
  void add_finding(std::string text) { findings_.push_back(std::move(text)); }
  const std::vector<std::string>& findings() const { return findings_; }

  std::vector<AuditRow> rows;
  std::optional<Mat> pairing;

  /// Header plus one row per index: i, norm_x, dualnorm_f, product, defect_row_max.
  std::string products_csv() const;

 private:
  std::string name_;
  std::vector<std::pair<std::string, double>> metrics_;
  std::vector<std::pair<std::string, bool>> checks_;
  std::vector<std::string> findings_;
};

/// 17 significant digits, '.' decimal point, "inf"/"-inf"/"nan" for
/// non-finite values.
std::string format_double(double v);

}  // namespace mbasis
