#include "mbasis/report.hpp"

#include "mbasis/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace mbasis {
namespace {

template <typename T>
auto find_key(std::vector<std::pair<std::string, T>>& v, const std::string& key) {
  return std::find_if(v.begin(), v.end(), [&](const auto& kv) { return kv.first == key; });
}

template <typename T>
auto find_key(const std::vector<std::pair<std::string, T>>& v, const std::string& key) {
  return std::find_if(v.begin(), v.end(), [&](const auto& kv) { return kv.first == key; });
}

}  // namespace

void AuditReport::set_metric(const std::string& key, double value) {
  if (auto it = find_key(metrics_, key); it != metrics_.end())
    it->second = value;
  else
    metrics_.emplace_back(key, value);
}

double AuditReport::metric(const std::string& key) const {
  auto it = find_key(metrics_, key);
  if (it == metrics_.end()) throw InvalidArgument("audit report '" + name_ + "' has no metric '" + key + "'");
  return it->second;
}

bool AuditReport::has_metric(const std::string& key) const {
  return find_key(metrics_, key) != metrics_.end();
}

void AuditReport::set_check(const std::string& key, bool passed) {
  if (auto it = find_key(checks_, key); it != checks_.end())
    it->second = passed;
  else
    checks_.emplace_back(key, passed);
}

bool AuditReport::check(const std::string& key) const {
  auto it = find_key(checks_, key);
  if (it == checks_.end()) throw InvalidArgument("audit report '" + name_ + "' has no check '" + key + "'");
  return it->second;
}

std::string AuditReport::products_csv() const {
  std::string out = "i,norm_x,dualnorm_f,product,defect_row_max\n";
  for (const auto& r : rows) {
    out += std::to_string(r.index) + ',' + format_double(r.norm_x) + ',' + format_double(r.dual_norm_f) +
           ',' + format_double(r.product) + ',' + format_double(r.defect_row_max) + '\n';
  }
  return out;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";  // folds -0 into 0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace mbasis
