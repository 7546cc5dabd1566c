#pragma once

#include <nlohmann/json_fwd.hpp>
#include <string>

#include "inls/dynamics.hpp"
#include "inls/functionals.hpp"
#include "inls/grid.hpp"
#include "inls/groundstate.hpp"
#include "inls/normalized.hpp"

namespace inls {

/// 17-significant-digit decimal form; round-trips double exactly.
std::string format_double(double x);

/// Field snapshot CSV, header "r,re,im".
std::string field_to_csv(const RadialField& u);
void write_field_csv(const RadialField& u, const std::string& path);
/// Rebuilds the field (and its cell-centered grid) from CSV; N is not stored
/// in the file and must be supplied.
RadialField field_from_csv(const std::string& text, int N);
RadialField read_field_csv(const std::string& path, int N);

nlohmann::json params_to_json(const ModelParams& p);
ModelParams params_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const FunctionalReport& r, const ModelParams& p);
nlohmann::json groundstate_to_json(const GroundState& q);
nlohmann::json classification_to_json(const Classification& c);

std::string trajectory_to_csv(const Trajectory& t);
void write_trajectory_csv(const Trajectory& t, const std::string& path);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

}  // namespace inls
