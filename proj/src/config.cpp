#include "shrinker/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <functional>
#include <istream>
#include <sstream>

namespace shrinker {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad(const std::string& key, const std::string& value) {
  throw Error(ErrorCode::InvalidParams, "bad value '" + value + "' for key '" + key + "'");
}

double to_double(const std::string& key, const std::string& v) {
  double x = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size()) bad(key, v);
  return x;
}

long long to_int(const std::string& key, const std::string& v) {
  long long x = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size()) bad(key, v);
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  bad(key, v);
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::map<std::string, std::string> parse_key_values(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(n, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ParseError(n, "empty key");
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

void apply_config(RunConfig& c, const std::map<std::string, std::string>& kv) {
  using Setter = std::function<void(const std::string&, const std::string&)>;
  const std::map<std::string, Setter> setters = {
      {"scheme", [&](auto&, auto& v) { c.scheme = v; }},
      {"family", [&](auto&, auto& v) { c.family = v; }},
      {"t", [&](auto& k, auto& v) { c.t = to_double(k, v); }},
      {"s", [&](auto& k, auto& v) { c.s = to_double(k, v); }},
      {"grid", [&](auto& k, auto& v) { c.grid = static_cast<int>(to_int(k, v)); }},
      {"refine", [&](auto& k, auto& v) { c.refine = static_cast<int>(to_int(k, v)); }},
      {"tol", [&](auto& k, auto& v) { c.tol = to_double(k, v); }},
      {"out", [&](auto&, auto& v) { c.out = v; }},
      {"seed", [&](auto& k, auto& v) { c.seed = static_cast<std::uint64_t>(to_int(k, v)); }},
      {"eps",
       [&](auto& k, auto& v) {
         c.eps.clear();
         std::stringstream ss(v);
         std::string item;
         while (std::getline(ss, item, ',')) c.eps.push_back(to_double(k, trim(item)));
         if (c.eps.empty()) bad(k, v);
       }},
      {"delta_ratio", [&](auto& k, auto& v) { c.delta_ratio = to_double(k, v); }},
      {"eps1", [&](auto& k, auto& v) { c.family_cfg.eps1 = to_double(k, v); }},
      {"neck_amplitude", [&](auto& k, auto& v) { c.family_cfg.neck_amplitude = to_double(k, v); }},
      {"cutoff_radius", [&](auto& k, auto& v) { c.family_cfg.cutoff_radius = to_double(k, v); }},
      {"retraction_power", [&](auto& k, auto& v) { c.family_cfg.retraction_power = to_double(k, v); }},
      {"alpha", [&](auto& k, auto& v) { c.family_cfg.alpha = to_double(k, v); }},
      {"alpha2", [&](auto& k, auto& v) { c.family_cfg.alpha2 = to_double(k, v); }},
      {"max_iterations", [&](auto& k, auto& v) { c.solver.max_iterations = static_cast<int>(to_int(k, v)); }},
      {"lambda_init", [&](auto& k, auto& v) { c.solver.lambda_init = to_double(k, v); }},
      {"lambda_decay", [&](auto& k, auto& v) { c.solver.lambda_decay = to_double(k, v); }},
      {"tangential_smoothing_weight",
       [&](auto& k, auto& v) { c.solver.tangential_smoothing_weight = to_double(k, v); }},
      {"smoothing_until_linf", [&](auto& k, auto& v) { c.solver.smoothing_until_linf = to_double(k, v); }},
      {"symmetrize_every_step", [&](auto& k, auto& v) { c.solver.symmetrize_every_step = to_bool(k, v); }},
      {"refinement_steps", [&](auto& k, auto& v) { c.solver.refinement_steps = static_cast<int>(to_int(k, v)); }},
      {"quadrature_order", [&](auto& k, auto& v) { c.solver.kernel.quadrature_order = static_cast<int>(to_int(k, v)); }},
  };
  for (const auto& [k, v] : kv) {
    auto it = setters.find(k);
    if (it == setters.end()) throw Error(ErrorCode::InvalidParams, "unknown config key '" + k + "'");
    it->second(k, v);
  }
}

void check_config(const RunConfig& c) {
  auto ids = scheme_ids();
  ids.push_back("sphere");
  if (std::find(ids.begin(), ids.end(), c.scheme) == ids.end())
    throw Error(ErrorCode::InvalidParams, "unknown scheme '" + c.scheme + "'");
  const std::vector<std::string> families = {"sphere", "doubled", "catenoid", "catenoid-param"};
  if (std::find(families.begin(), families.end(), c.family) == families.end())
    throw Error(ErrorCode::InvalidParams, "unknown family '" + c.family + "'");
  if (c.grid < 1) throw Error(ErrorCode::InvalidParams, "grid must be >= 1");
  if (c.refine < 0 || c.refine > 7) throw Error(ErrorCode::InvalidParams, "refine must lie in [0, 7]");
  if (!(c.tol > 0.0)) throw Error(ErrorCode::InvalidParams, "tol must be positive");
  if (c.out.empty()) throw Error(ErrorCode::InvalidParams, "out must be a directory name");
  const int q = c.solver.kernel.quadrature_order;
  if (q != 1 && q != 3 && q != 6) throw Error(ErrorCode::InvalidParams, "quadrature_order must be 1, 3 or 6");
}

std::string canonical_text(const RunConfig& c) {
  std::ostringstream o;
  o << "scheme=" << c.scheme << "\nfamily=" << c.family << "\nt=" << fmt(c.t) << "\ns=" << fmt(c.s)
    << "\ngrid=" << c.grid << "\nrefine=" << c.refine << "\ntol=" << fmt(c.tol) << "\nseed=" << c.seed << "\neps=";
  for (std::size_t i = 0; i < c.eps.size(); ++i) o << (i ? "," : "") << fmt(c.eps[i]);
  o << "\ndelta_ratio=" << fmt(c.delta_ratio) << "\neps1=" << fmt(c.family_cfg.eps1)
    << "\nneck_amplitude=" << fmt(c.family_cfg.neck_amplitude) << "\ncutoff_radius=" << fmt(c.family_cfg.cutoff_radius)
    << "\nretraction_power=" << fmt(c.family_cfg.retraction_power) << "\nalpha=" << fmt(c.family_cfg.alpha)
    << "\nalpha2=" << fmt(c.family_cfg.alpha2) << "\nmax_iterations=" << c.solver.max_iterations
    << "\nlambda_init=" << fmt(c.solver.lambda_init) << "\nlambda_decay=" << fmt(c.solver.lambda_decay)
    << "\ntangential_smoothing_weight=" << fmt(c.solver.tangential_smoothing_weight)
    << "\nsmoothing_until_linf=" << fmt(c.solver.smoothing_until_linf)
    << "\nsymmetrize_every_step=" << (c.solver.symmetrize_every_step ? "true" : "false")
    << "\nrefinement_steps=" << c.solver.refinement_steps << "\nquadrature_order=" << c.solver.kernel.quadrature_order
    << "\n";
  return o.str();
}

std::uint64_t config_hash(const RunConfig& c) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : canonical_text(c)) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace shrinker
