#pragma once

// JSON formats:
//   Theta:        { "n": int, "theta": [[real]] }   (strict upper triangle is read)
//   TorusElement: [ { "m": [int], "re": real, "im": real } ]
//   Operator:     [ { "alpha": [int], "matrix": [[TorusElement]] } ]
//   Connection:   { "m": int, "A": [ [[TorusElement]] per delta_j ] }

#include <string>

#include <json.hpp>

#include "nck/clifford.hpp"
#include "nck/diffop.hpp"
#include "nck/holomorphic.hpp"
#include "nck/report.hpp"
#include "nck/torus.hpp"

namespace nck {

using json = nlohmann::json;

json to_json(const TorusElement& a);
/// Throws std::invalid_argument on malformed input or exponent length != n.
TorusElement element_from_json(const json& j, int n);

json to_json(const ThetaMatrix& theta);
ThetaMatrix theta_from_json(const json& j);

json to_json(const NCDiffOp& op);
json to_json(const Matrix& m);
json to_json(const GammaRep& rep);
json to_json(const SignTriple& s);

json to_json(const Connection& c);
Connection connection_from_json(const json& j, int torus_dim);

json checks_to_json(const VerificationReport& report);

/// Reads and parses a JSON file; throws std::runtime_error if it cannot be read.
json read_json_file(const std::string& path);
/// Writes `text` to a temporary file next to `path` and renames it into place.
void write_file_atomic(const std::string& path, const std::string& text);

}  // namespace nck
