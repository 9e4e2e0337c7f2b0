#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hqoc/simulator.hpp"

namespace hqoc {

const char* version();

// {"tool", "version", "command", "config"} wrapper shared by every report.
nlohmann::json report_envelope(const std::string& command, const nlohmann::json& config);

// Shortest decimal that round-trips the double.
std::string format_real(double v);

// "y_1,...,y_m,z_1,...,z_r" per shot, with a header line.
void write_samples_csv(std::ostream& os, const std::vector<HomodyneShot>& shots);

}  // namespace hqoc
