#pragma once

// Deterministic JSON for reports: fixed field order, floats printed with
// 17 significant digits, non-finite values as null.

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "bicons4/biconservative.hpp"
#include "bicons4/surface.hpp"

namespace bicons4 {

using JsonScalar = std::variant<std::string, double, int, bool>;
/// Leading key/value pairs written before the report body.
using JsonMeta = std::vector<std::pair<std::string, JsonScalar>>;

std::string to_json(const VerifySummary& v, const JsonMeta& meta = {});
std::string to_json(const SliceReport& r, const JsonMeta& meta = {});

/// "%.17g"
std::string format_real(double x);

}  // namespace bicons4
