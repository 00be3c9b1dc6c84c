#include <cmath>
#include <cstdio>

#include "bicons4/report.hpp"
#include "json.hpp"

namespace bicons4 {

using ojson = nlohmann::ordered_json;

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

void dump(const ojson& j, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  switch (j.type()) {
    case ojson::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + ojson(it.key()).dump() + ": ";
        dump(it.value(), out, indent + 2);
      }
      out += "\n" + close + "}";
      return;
    }
    case ojson::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      bool flat = true;
      for (const auto& e : j) flat = flat && e.is_primitive();
      if (flat) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          dump(j[i], out, indent);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        dump(j[i], out, indent + 2);
      }
      out += "\n" + close + "]";
      return;
    }
    case ojson::value_t::number_float: {
      double x = j.get<double>();
      out += std::isfinite(x) ? format_real(x) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

std::string render(const ojson& j) {
  std::string out;
  dump(j, out, 0);
  out += "\n";
  return out;
}

void put_meta(ojson& j, const JsonMeta& meta) {
  for (const auto& [k, v] : meta) std::visit([&](const auto& x) { j[k] = x; }, v);
}

ojson opt(const std::optional<double>& v) { return v ? ojson(*v) : ojson(nullptr); }

}  // namespace

std::string to_json(const VerifySummary& v, const JsonMeta& meta) {
  ojson j = ojson::object();
  put_meta(j, meta);
  j["label"] = v.label;
  j["grid"] = {v.grid.ns, v.grid.nt, v.grid.nu};
  j["domain"] = {{"s", {v.domain.lo[0], v.domain.hi[0]}},
                 {"t", {v.domain.lo[1], v.domain.hi[1]}},
                 {"u", {v.domain.lo[2], v.domain.hi[2]}}};
  j["points"] = v.points;
  j["max_residual"] = v.max_residual;
  j["mean_residual"] = v.mean_residual;
  j["max_scaled_residual"] = v.max_scaled_residual;
  j["epsilon"] = v.epsilon;
  j["epsilon1"] = v.epsilon1;
  j["signature_consistent"] = v.signature_consistent;
  j["case"] = std::string(to_string(v.kase));
  j["worst_point"] = {{"s", v.worst_point.s}, {"t", v.worst_point.t}, {"u", v.worst_point.u}};
  j["distinct_count"] = {{"1", v.distinct_histogram[0]}, {"2", v.distinct_histogram[1]}, {"3", v.distinct_histogram[2]}};
  ojson cases = ojson::object();
  for (int c = 0; c < 5; ++c) cases[std::string(to_string(static_cast<PointCase>(c)))] = v.case_histogram[static_cast<std::size_t>(c)];
  j["case_histogram"] = cases;
  j["min_separation"] = v.min_separation;
  j["max_abs_k"] = v.max_abs_k;
  j["min_abs_k"] = v.min_abs_k;
  j["gauss_residual"] = v.max_gauss;
  j["codazzi_residual"] = v.max_codazzi;
  ojson om = ojson::object();
  for (std::size_t q = 0; q < 5; ++q) om[kOmegaNames[q]] = opt(v.omega_max[q]);
  j["connection_forms"] = om;
  j["max_dH_dt"] = v.max_dH_t;
  j["max_dH_du"] = v.max_dH_u;
  j["k1_relation"] = opt(v.max_k1_relation);
  j["scalar_condition"] = opt(v.max_scalar_condition);
  j["tau_bic"] = v.tau_bic;
  j["pass"] = v.pass;
  return render(j);
}

std::string to_json(const SliceReport& r, const JsonMeta& meta) {
  ojson j = ojson::object();
  put_meta(j, meta);
  auto m2 = [](const Mat2& m) { return ojson{{m[0][0], m[0][1]}, {m[1][0], m[1][1]}}; };
  j["signature"] = std::string(to_string(r.signature));
  j["shape_op_f3"] = m2(r.shape_op_f3);
  j["shape_op_f4"] = m2(r.shape_op_f4);
  j["c1"] = r.c1;
  j["c2"] = r.c2;
  j["d1"] = r.d1;
  j["d2"] = r.d2;
  j["eps3"] = r.eps3;
  j["eps4"] = r.eps4;
  j["max_offdiag"] = r.max_offdiag;
  j["diag_variance"] = r.diag_variance;
  j["gauss_curvature"] = r.gauss_curvature;
  j["gauss_extrinsic"] = r.gauss_extrinsic;
  j["max_abs_gauss"] = r.max_abs_gauss;
  j["flat_relation"] = r.flat_relation;
  j["mean_curvature_vec"] = {r.mean_curvature_vec[0], r.mean_curvature_vec[1], r.mean_curvature_vec[2],
                             r.mean_curvature_vec[3]};
  j["mean_curvature_sq"] = r.mean_curvature_sq;
  j["pmc_residual"] = r.pmc_residual;
  j["is_flat"] = r.is_flat;
  j["is_marginally_trapped"] = r.is_marginally_trapped;
  j["degenerate_normal_plane"] = r.degenerate_normal_plane;
  j["samples"] = r.samples;
  return render(j);
}

}  // namespace bicons4
