#include "hqoc/report.hpp"

#include <charconv>

namespace hqoc {

const char* version() { return HQOC_VERSION; }

nlohmann::json report_envelope(const std::string& command, const nlohmann::json& config) {
  return {{"tool", "hqoc"}, {"version", version()}, {"command", command}, {"config", config}};
}

std::string format_real(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

void write_samples_csv(std::ostream& os, const std::vector<HomodyneShot>& shots) {
  if (shots.empty()) return;
  const auto m = shots.front().y.size();
  const auto r = shots.front().z.size();
  for (std::size_t a = 0; a < m; ++a) os << (a ? "," : "") << "y_" << a + 1;
  for (std::size_t q = 0; q < r; ++q) os << (m + q ? "," : "") << "z_" << q + 1;
  os << '\n';
  for (const auto& s : shots) {
    for (std::size_t a = 0; a < m; ++a) os << (a ? "," : "") << format_real(s.y[a]);
    for (std::size_t q = 0; q < r; ++q) os << (m + q ? "," : "") << s.z[q];
    os << '\n';
  }
}

}  // namespace hqoc
