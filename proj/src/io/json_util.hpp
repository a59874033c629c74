#pragma once

// Field-anchored JSON readers shared by the io sources.

#include <string>

#include "json.hpp"
#include "lreach/io/io.hpp"

namespace lreach::io::detail {

using json = nlohmann::json;

json parse_json(const std::string& text, const std::string& where);
const json& field(const json& j, const std::string& key, const std::string& where);
double number(const json& j, const std::string& where);
int integer(const json& j, const std::string& where);
/// expect < 0 accepts any length.
Eigen::VectorXd vector(const json& j, const std::string& where, int expect);
/// cols < 0 takes the width of the first row.
Eigen::MatrixXd matrix(const json& j, const std::string& where, int cols);
PolytopeDoc polytope(const json& j, const std::string& where);
geom::Ellipsoid ellipsoid(const json& j, const std::string& where);

}  // namespace lreach::io::detail
