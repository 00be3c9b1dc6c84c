#include "bicons4/cli.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bicons4/biconservative.hpp"
#include "bicons4/catalog.hpp"
#include "bicons4/error.hpp"
#include "bicons4/report.hpp"
#include "bicons4/surface.hpp"
#include "json.hpp"

namespace bicons4::cli {
namespace {

using json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Every option is read as text first so that flag values and --config
// entries go through one conversion path.
const std::vector<std::string> kKeys = {
    "family", "signature", "a",          "c1",         "A",         "B",          "r",
    "branch", "s",         "grid",       "profile-file", "init",    "step",       "ode",
    "format", "lemma",     "at-s",       "tau-bic",    "tau-scalar", "tau-dist",  "grad-tol",
    "delta-guard", "output"};

struct RunConfig {
  std::optional<FamilyId> family;
  std::optional<MetricSignature> signature;
  Params params;
  Branch branch = Branch::Printed;
  std::optional<std::array<double, 2>> s_range;
  GridSpec grid{8, 8, 8};
  std::optional<std::string> profile_file;
  std::optional<OdeInit> init;
  double step = 1e-3;
  std::optional<OdeVariant> ode;
  std::optional<std::string> format;
  std::optional<LemmaCase> lemma;
  std::optional<double> at_s;
  double tau_bic = 1e-6;
  double tau_scalar = 1e-6;
  double tau_dist = 1e-6;
  double grad_tol = 1e-8;
  double delta_guard = kDeltaGuard;
  std::optional<std::string> output;
};

double parse_real(const std::string& key, const std::string& text) {
  const char* b = text.c_str();
  char* end = nullptr;
  double v = std::strtod(b, &end);
  if (end == b || *end != '\0' || !std::isfinite(v))
    throw UsageError("invalid value for '" + key + "': '" + text + "' is not a finite number");
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string config_value_text(const std::string& key, const json& v) {
  auto scalar = [&](const json& x) -> std::string {
    if (x.is_string()) return x.get<std::string>();
    if (x.is_number_integer()) return std::to_string(x.get<long long>());
    if (x.is_number()) return format_real(x.get<double>());
    throw UsageError("config key '" + key + "' has an unsupported value type");
  };
  if (!v.is_array()) return scalar(v);
  char sep = key == "s" ? ':' : key == "grid" ? 'x' : ',';
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += scalar(v[i]);
  }
  return out;
}

std::map<std::string, std::string> load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  if (!doc.is_object()) throw UsageError("config file '" + path + "' must hold a JSON object");
  std::map<std::string, std::string> out;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    std::string key = it.key();
    for (auto& c : key)
      if (c == '_') c = '-';
    bool known = false;
    for (const auto& k : kKeys) known = known || k == key;
    if (!known) throw UsageError("unknown config key '" + it.key() + "'");
    out[key] = config_value_text(key, it.value());
  }
  return out;
}

RunConfig to_config(const std::map<std::string, std::string>& raw) {
  RunConfig c;
  auto get = [&](const std::string& k) -> const std::string* {
    auto it = raw.find(k);
    return it == raw.end() ? nullptr : &it->second;
  };
  if (auto v = get("family")) {
    c.family = parse_family(*v);
    if (!c.family) throw Error(ErrorKind::UnknownFamily, "unknown family '" + *v + "' (see 'list')");
  }
  if (auto v = get("signature")) {
    if (*v == "riemannian") c.signature = MetricSignature::Riemannian;
    else if (*v == "lorentzian") c.signature = MetricSignature::Lorentzian;
    else throw UsageError("invalid value for 'signature': expected riemannian or lorentzian");
  }
  for (const char* p : {"a", "c1", "A", "B", "r"})
    if (auto v = get(p)) c.params[p] = parse_real(p, *v);
  if (auto v = get("branch")) {
    if (*v == "printed") c.branch = Branch::Printed;
    else if (*v == "complement") c.branch = Branch::Complement;
    else throw UsageError("invalid value for 'branch': expected printed or complement");
  }
  if (auto v = get("s")) {
    auto parts = split(*v, ':');
    if (parts.size() != 2) throw UsageError("invalid value for 's': expected lo:hi");
    std::array<double, 2> r{parse_real("s", parts[0]), parse_real("s", parts[1])};
    if (!(r[0] < r[1])) throw UsageError("invalid value for 's': need lo < hi");
    c.s_range = r;
  }
  if (auto v = get("grid")) {
    auto parts = split(*v, 'x');
    if (parts.size() != 3) throw UsageError("invalid value for 'grid': expected NxNxN");
    std::array<int, 3> n{};
    for (int i = 0; i < 3; ++i) {
      double d = parse_real("grid", parts[i]);
      if (d != std::floor(d) || d < 2 || d > 1000)
        throw UsageError("invalid value for 'grid': each size must be an integer in [2, 1000]");
      n[i] = static_cast<int>(d);
    }
    c.grid = {n[0], n[1], n[2]};
  }
  if (auto v = get("profile-file")) c.profile_file = *v;
  if (auto v = get("init")) {
    auto parts = split(*v, ',');
    if (parts.size() != 3) throw UsageError("invalid value for 'init': expected s0,f0,fp0");
    c.init = OdeInit{parse_real("init", parts[0]), parse_real("init", parts[1]), parse_real("init", parts[2])};
  }
  if (auto v = get("step")) {
    c.step = parse_real("step", *v);
    if (c.step <= 0) throw UsageError("invalid value for 'step': must be positive");
  }
  if (auto v = get("ode")) {
    if (*v == "printed") c.ode = OdeVariant::Printed;
    else if (*v == "corrected") c.ode = OdeVariant::Corrected;
    else if (*v == "synthesize") c.ode = OdeVariant::Synthesize;
    else throw UsageError("invalid value for 'ode': expected printed, corrected or synthesize");
  }
  if (auto v = get("format")) {
    if (*v != "json" && *v != "csv" && *v != "text")
      throw UsageError("invalid value for 'format': expected json, csv or text");
    c.format = *v;
  }
  if (auto v = get("lemma")) {
    c.lemma = parse_lemma_case(*v);
    if (!c.lemma) throw UsageError("invalid value for 'lemma': expected a roman numeral i..xi");
  }
  if (auto v = get("at-s")) c.at_s = parse_real("at-s", *v);
  auto positive = [&](const char* key, double& dst) {
    if (auto v = get(key)) {
      dst = parse_real(key, *v);
      if (dst <= 0) throw UsageError(std::string("invalid value for '") + key + "': must be positive");
    }
  };
  positive("tau-bic", c.tau_bic);
  positive("tau-scalar", c.tau_scalar);
  positive("tau-dist", c.tau_dist);
  positive("grad-tol", c.grad_tol);
  positive("delta-guard", c.delta_guard);
  if (auto v = get("output")) c.output = *v;
  return c;
}

BiconservativeOptions bic_options(const RunConfig& c) {
  BiconservativeOptions o;
  o.tau_bic = c.tau_bic;
  o.tau_scalar = c.tau_scalar;
  o.geometry.dist_rel = c.tau_dist;
  o.geometry.grad_tol = c.grad_tol;
  return o;
}

FamilySpec family_spec(const RunConfig& c) {
  if (!c.family) throw Error(ErrorKind::MissingParam, "missing required parameter 'family'");
  FamilySpec spec;
  spec.id = *c.family;
  spec.signature = c.signature.value_or(family_info(spec.id).signatures.front());
  spec.params = c.params;
  spec.branch = c.branch;
  return spec;
}

struct BuiltProfile {
  ProfileSolution profile;
  std::array<double, 2> s_range;
};

std::array<double, 2> hull(std::array<double, 2> r, double s0) { return {std::min(r[0], s0), std::max(r[1], s0)}; }

BuiltProfile make_profile(const RunConfig& c, const FamilySpec& spec) {
  ProfileSolution prof;
  if (c.profile_file) {
    prof = ProfileSolution::read_csv_file(*c.profile_file);
  } else {
    const FamilyId id = spec.id;
    if (id == FamilyId::X1 || id == FamilyId::NullCone) {
      auto r = c.s_range ? *c.s_range : default_s_range(spec);
      prof = profile_closed_form(spec, r);
    } else {
      OdeInit init = c.init ? *c.init : default_init(spec);
      const bool rotational = id == FamilyId::RotCoshSinh || id == FamilyId::RotSinhCosh;
      OdeVariant variant = c.ode.value_or(rotational ? OdeVariant::Printed : OdeVariant::Synthesize);
      if (!rotational && variant != OdeVariant::Synthesize)
        throw Error(ErrorKind::BadParams, "parameter 'ode': family '" + std::string(to_string(id)) +
                                              "' has no explicit ODE; use synthesize");
      const double span = variant == OdeVariant::Synthesize ? 0.5 : 0.1;
      auto iv = c.s_range ? hull(*c.s_range, init.s0) : std::array<double, 2>{init.s0, init.s0 + span};
      if (variant == OdeVariant::Synthesize) {
        SynthesisOptions so;
        so.step = c.step;
        so.delta = c.delta_guard;
        prof = profile_synthesize(spec, init, iv, so);
      } else {
        Rk4Options ro;
        ro.step = c.step;
        ro.delta = c.delta_guard;
        prof = ode_rk4(rotational_ode(id, spec.signature, variant), init, iv, rotational_guards(id), ro);
      }
    }
  }
  return {prof, c.s_range ? *c.s_range : prof.valid_interval()};
}

JsonMeta family_meta(const FamilySpec& spec) {
  JsonMeta m;
  m.emplace_back("family", std::string(to_string(spec.id)));
  m.emplace_back("signature", std::string(to_string(spec.signature)));
  if (spec.id == FamilyId::X1) m.emplace_back("branch", std::string(to_string(spec.branch)));
  for (const auto& [k, v] : spec.params) m.emplace_back(k, v);
  return m;
}

void emit(const RunConfig& c, std::ostream& out, const std::string& text) {
  if (!c.output) {
    out << text;
    return;
  }
  std::ofstream f(*c.output, std::ios::binary);
  if (!f) throw Error(ErrorKind::Io, "cannot write '" + *c.output + "'");
  f << text;
  if (!f) throw Error(ErrorKind::Io, "write failed for '" + *c.output + "'");
}

void require_format(const RunConfig& c, std::initializer_list<const char*> allowed, const char* cmd) {
  if (!c.format) return;
  for (const char* a : allowed)
    if (*c.format == a) return;
  throw UsageError(std::string("invalid value for 'format': '") + *c.format + "' is not supported by " + cmd);
}

std::string signature_list(const FamilyInfo& info) {
  std::string s;
  for (std::size_t i = 0; i < info.signatures.size(); ++i) {
    if (i) s += ",";
    s += to_string(info.signatures[i]);
  }
  return s;
}

int cmd_list(const RunConfig& c, const std::string& which, std::ostream& out) {
  require_format(c, {"json", "text"}, "list");
  std::vector<const FamilyInfo*> rows;
  for (const auto& info : family_registry())
    if (which.empty() || info.name == which) rows.push_back(&info);
  if (!which.empty() && rows.empty())
    throw Error(ErrorKind::UnknownFamily, "unknown family '" + which + "'");

  std::ostringstream os;
  if (c.format.value_or("text") == "json") {
    json arr = json::array();
    for (const auto* info : rows) {
      json e;
      e["name"] = info->name;
      e["description"] = info->description;
      e["parametrization"] = info->parametrization;
      json ps = json::array();
      for (const auto& p : info->params)
        ps.push_back(json{{"name", p.name}, {"description", p.description}, {"required", p.required}});
      e["params"] = ps;
      json sigs = json::array();
      for (auto s : info->signatures) sigs.push_back(std::string(to_string(s)));
      e["signatures"] = sigs;
      e["profile"] = info->profile_source;
      arr.push_back(e);
    }
    os << arr.dump(2) << "\n";
  } else {
    for (const auto* info : rows) {
      os << info->name << "\n";
      os << "  " << info->description << "\n";
      os << "  x(s,t,u) = " << info->parametrization << "\n";
      os << "  signatures: " << signature_list(*info) << "\n";
      os << "  profile: " << info->profile_source << "\n";
      os << "  params:";
      if (info->params.empty()) os << " none";
      for (const auto& p : info->params) os << " " << p.name << (p.required ? "" : "?");
      os << "\n";
    }
    os << "lemma surfaces (slice --lemma): i ii iii iv v vi vii viii ix x xi\n";
  }
  emit(c, out, os.str());
  return kExitOk;
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
  require_format(c, {"json"}, "verify");
  FamilySpec spec = family_spec(c);
  auto bp = make_profile(c, spec);
  ImmersionPatch patch = build_family(spec, bp.profile, bp.s_range);
  VerifySummary v = grid_verify(patch, c.grid, bic_options(c));
  emit(c, out, to_json(v, family_meta(spec)));
  return v.pass ? kExitOk : kExitResidual;
}

int cmd_profile(const RunConfig& c, std::ostream& out) {
  require_format(c, {"csv"}, "profile");
  FamilySpec spec = family_spec(c);
  auto bp = make_profile(c, spec);
  std::ostringstream os;
  bp.profile.write_csv(os);
  emit(c, out, os.str());
  return kExitOk;
}

int cmd_slice(const RunConfig& c, std::ostream& out) {
  require_format(c, {"json"}, "slice");
  SurfacePatch sp;
  JsonMeta meta;
  if (c.lemma) {
    sp = build_lemma_surface(*c.lemma, c.params);
    meta.emplace_back("lemma", std::string(to_string(*c.lemma)));
    for (const auto& [k, v] : c.params) meta.emplace_back(k, v);
  } else {
    if (!c.family) throw Error(ErrorKind::MissingParam, "missing required parameter 'lemma' or 'family'");
    if (!c.at_s) throw Error(ErrorKind::MissingParam, "missing required parameter 'at-s'");
    FamilySpec spec = family_spec(c);
    RunConfig cc = c;
    if (!cc.s_range && !cc.profile_file && (spec.id == FamilyId::X1 || spec.id == FamilyId::NullCone)) {
      // Small window around the slice keeps the closed-form table cheap.
      double h = 0.05 * std::max(1.0, std::abs(*c.at_s));
      cc.s_range = std::array<double, 2>{*c.at_s - h, *c.at_s + h};
    }
    if (!cc.s_range && cc.init == std::nullopt && !cc.profile_file) {
      OdeInit init = default_init(spec);
      if (*c.at_s < init.s0) cc.s_range = std::array<double, 2>{*c.at_s, init.s0};
    }
    auto bp = make_profile(cc, spec);
    if (!(*c.at_s > bp.s_range[0] - 1e-12 && *c.at_s < bp.s_range[1] + 1e-12))
      throw Error(ErrorKind::IntervalMismatch,
                  "parameter 'at-s' = " + format_real(*c.at_s) + " is outside the profile interval", *c.at_s);
    ImmersionPatch patch = build_family(spec, bp.profile, bp.s_range);
    sp = slice_of(patch, *c.at_s);
    meta = family_meta(spec);
    meta.emplace_back("s0", *c.at_s);
  }
  SliceReport r = slice_check(sp);
  emit(c, out, to_json(r, meta));
  const bool ok = r.max_offdiag < 1e-8 && r.diag_variance < 1e-8 && r.pmc_residual < 1e-8;
  return ok ? kExitOk : kExitResidual;
}

int cmd_mesh(const RunConfig& c, std::ostream& out) {
  require_format(c, {"csv"}, "mesh");
  FamilySpec spec = family_spec(c);
  auto bp = make_profile(c, spec);
  ImmersionPatch patch = build_family(spec, bp.profile, bp.s_range);
  auto recs = evaluate_grid(patch, c.grid, bic_options(c));
  std::string text = "s,t,u,x0,x1,x2,x3,k1,k2,k3,H,residual\n";
  for (const auto& r : recs) {
    const double vals[12] = {r.p.s,          r.p.t,          r.p.u,          r.x[0],
                             r.x[1],         r.x[2],         r.x[3],         r.report.k[0],
                             r.report.k[1],  r.report.k[2],  r.report.H,     r.report.residual_norm};
    for (int i = 0; i < 12; ++i) {
      if (i) text += ',';
      text += format_real(vals[i]);
    }
    text += '\n';
  }
  emit(c, out, text);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Biconservative hypersurfaces in Minkowski 4-space: build, solve, verify, export."};
  app.require_subcommand(1, 1);
  std::map<std::string, std::string> flags;
  std::string config_path;
  std::string list_which;
  std::vector<std::pair<CLI::App*, std::vector<std::pair<std::string, CLI::Option*>>>> subs;

  auto add = [&](CLI::App* sub, const std::vector<std::string>& keys) {
    std::vector<std::pair<std::string, CLI::Option*>> opts;
    for (const auto& k : keys) opts.emplace_back(k, sub->add_option("--" + k, flags[k]));
    sub->add_option("--config", config_path, "JSON file with the same keys; flags override");
    subs.emplace_back(sub, std::move(opts));
  };
  const std::vector<std::string> family_keys = {"family", "signature", "a",   "c1",   "A",   "B",
                                                "r",      "branch",    "s",   "profile-file", "init", "step",
                                                "ode",    "format",    "delta-guard", "output"};
  const std::vector<std::string> tol_keys = {"tau-bic", "tau-scalar", "tau-dist", "grad-tol"};
  auto with = [](std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  };

  auto* list = app.add_subcommand("list", "List the family catalogue");
  list->add_option("family", list_which, "Show one family only");
  add(list, {"format", "output"});

  auto* verify = app.add_subcommand("verify", "Grid verification of a family patch (JSON)");
  add(verify, with(with(family_keys, tol_keys), {"grid"}));

  auto* profile = app.add_subcommand("profile", "Tabulate a profile function (CSV s,f,fp,fpp)");
  add(profile, family_keys);

  auto* slice = app.add_subcommand("slice", "Slice report for a lemma surface or an s = s0 slice (JSON)");
  add(slice, with(family_keys, {"lemma", "at-s"}));

  auto* mesh = app.add_subcommand("mesh", "Point cloud with curvatures and residual (CSV)");
  add(mesh, with(with(family_keys, tol_keys), {"grid"}));

  std::vector<const char*> argv{"bicons4"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitDomain;
  }

  try {
    CLI::App* active = nullptr;
    const std::vector<std::pair<std::string, CLI::Option*>>* opts = nullptr;
    for (const auto& [sub, o] : subs)
      if (sub->parsed()) {
        active = sub;
        opts = &o;
      }
    std::map<std::string, std::string> raw;
    if (!config_path.empty()) raw = load_config(config_path);
    for (const auto& [k, opt] : *opts)
      if (opt->count() > 0) raw[k] = flags[k];
    RunConfig cfg = to_config(raw);

    const std::string name = active->get_name();
    if (name == "list") return cmd_list(cfg, list_which, out);
    if (name == "verify") return cmd_verify(cfg, out);
    if (name == "profile") return cmd_profile(cfg, out);
    if (name == "slice") return cmd_slice(cfg, out);
    if (name == "mesh") return cmd_mesh(cfg, out);
    err << "error: unknown command\n";
    return kExitDomain;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const Error& e) {
    err << "error: " << e.what();
    if (e.location() && e.message().find(" at ") == std::string::npos)
      err << " (at s = " << format_real(*e.location()) << ")";
    err << "\n";
    return kExitDomain;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace bicons4::cli
