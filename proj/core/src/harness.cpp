#include "dmkdv/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "dmkdv/errors.hpp"
#include "json.hpp"

namespace dmkdv {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const char* const kColumns[] = {"n", "t", "v", "q_direct", "q_asym", "abs_err", "scaled_err",
                                "imag_residual"};

template <class T>
T get_or(const json& obj, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  return obj.at(key).get<T>();
}

void reject_unknown(const json& obj, std::initializer_list<const char*> known, const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; }))
      throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("override '" + assignment + "' is not of the form key=value");
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;
  std::string pointer;
  std::stringstream parts(key);
  std::string part;
  while (std::getline(parts, part, '.')) {
    if (part.empty()) throw ConfigError("override key '" + key + "' has an empty component");
    pointer += "/" + part;
  }
  doc[json::json_pointer(pointer)] = value;
}

RunConfig from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");
  reject_unknown(doc,
                 {"profile", "rays", "times", "dt", "grid_size", "tolerances", "sign_convention",
                  "output", "window_margin", "max_speed", "threads"},
                 "configuration");
  RunConfig c;
  if (doc.contains("profile")) {
    const json& p = doc.at("profile");
    reject_unknown(p, {"kind", "amplitude", "width", "center", "values"}, "profile");
    c.profile.kind = profile_kind_from_string(get_or<std::string>(p, "kind", "single_site"));
    c.profile.amplitude = get_or(p, "amplitude", c.profile.amplitude);
    c.profile.width = get_or(p, "width", c.profile.width);
    c.profile.center = get_or<std::int64_t>(p, "center", c.profile.center);
    c.profile.values = get_or(p, "values", c.profile.values);
  }
  c.rays = get_or(doc, "rays", c.rays);
  c.times = get_or(doc, "times", c.times);
  c.dt = get_or(doc, "dt", c.dt);
  c.grid_size = get_or<std::size_t>(doc, "grid_size", c.grid_size);
  c.window_margin = get_or(doc, "window_margin", c.window_margin);
  c.max_speed = get_or(doc, "max_speed", c.max_speed);
  c.threads = get_or(doc, "threads", c.threads);
  if (doc.contains("tolerances")) {
    const json& t = doc.at("tolerances");
    reject_unknown(t, {"quadrature", "realness", "spill", "realness_calibration"}, "tolerances");
    c.tolerances.quadrature = get_or(t, "quadrature", c.tolerances.quadrature);
    c.tolerances.realness = get_or(t, "realness", c.tolerances.realness);
    c.tolerances.spill = get_or(t, "spill", c.tolerances.spill);
    c.tolerances.realness_calibration =
        get_or(t, "realness_calibration", c.tolerances.realness_calibration);
  }
  if (doc.contains("sign_convention"))
    c.sign_convention = sign_convention_from_string(doc.at("sign_convention").get<std::string>());
  if (doc.contains("output")) {
    const json& o = doc.at("output");
    reject_unknown(o, {"path", "format"}, "output");
    c.output.path = get_or<std::string>(o, "path", "");
    c.output.format = output_format_from_string(get_or<std::string>(o, "format", "csv"));
  }
  c.validate();
  return c;
}

json to_json_doc(const RunConfig& c) {
  json doc;
  doc["profile"] = {{"kind", to_string(c.profile.kind)},
                    {"amplitude", c.profile.amplitude},
                    {"width", c.profile.width},
                    {"center", c.profile.center}};
  if (!c.profile.values.empty()) doc["profile"]["values"] = c.profile.values;
  doc["rays"] = c.rays;
  doc["times"] = c.times;
  doc["dt"] = c.dt;
  doc["grid_size"] = c.grid_size;
  doc["window_margin"] = c.window_margin;
  doc["max_speed"] = c.max_speed;
  doc["threads"] = c.threads;
  doc["tolerances"] = {{"quadrature", c.tolerances.quadrature},
                       {"realness", c.tolerances.realness},
                       {"spill", c.tolerances.spill},
                       {"realness_calibration", c.tolerances.realness_calibration}};
  doc["sign_convention"] = to_string(c.sign_convention);
  doc["output"] = {{"path", c.output.path}, {"format", to_string(c.output.format)}};
  return doc;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

std::string to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

OutputFormat output_format_from_string(const std::string& name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  throw ConfigError("unknown output format '" + name + "'");
}

void RunConfig::validate() const {
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  if (times.empty()) throw ConfigError("times must not be empty");
  if (rays.empty()) throw ConfigError("rays must not be empty");
  if (!(max_speed > 0.0 && max_speed < 2.0)) throw ConfigError("max_speed must lie in (0, 2)");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0)) throw ConfigError("times must be positive");
    if (i > 0 && !(times[i] > times[i - 1])) throw ConfigError("times must be increasing");
  }
  for (double v : rays)
    if (!(std::abs(v) <= max_speed)) throw ConfigError("ray speed exceeds max_speed");
  if (!(window_margin >= 0.0)) throw ConfigError("window_margin must be nonnegative");
  if (grid_size < 64 || (grid_size & (grid_size - 1)) != 0)
    throw ConfigError("grid_size must be a power of two >= 64");
  if (!(tolerances.quadrature > 0.0) || !(tolerances.realness > 0.0) || !(tolerances.spill > 0.0) ||
      !(tolerances.realness_calibration > 0.0))
    throw ConfigError("tolerances must be positive");
  if (profile.kind != ProfileKind::custom_list && profile.kind != ProfileKind::zero &&
      !(std::abs(profile.amplitude) < 1.0))
    throw ConfigError("profile amplitude must lie in (-1, 1)");
  if (profile.kind == ProfileKind::gaussian && !(profile.width > 0.0))
    throw ConfigError("gaussian width must be positive");
  for (double q : profile.values)
    if (!(std::abs(q) < 1.0)) throw ConfigError("custom profile values must lie in (-1, 1)");
}

RunConfig parse_config(std::string_view json_text, std::span<const std::string> overrides) {
  json doc = json::parse(json_text.begin(), json_text.end(), nullptr, false);
  if (doc.is_discarded()) throw ConfigError("configuration is not valid JSON");
  try {
    for (const auto& o : overrides) apply_override(doc, o);
    return from_json(doc);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("configuration: ") + e.what());
  }
}

RunConfig load_config(const std::string& path, std::span<const std::string> overrides) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read configuration file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), overrides);
}

std::string config_to_json(const RunConfig& config) { return to_json_doc(config).dump(2); }

std::vector<ComparisonRecord> run_compare(const RunConfig& config) {
  config.validate();
  const double t_max = config.times.back();
  const auto half_width =
      window_half_width(t_max, config.window_margin) + config.profile.extent();
  const LatticeState initial = config.profile.realize(half_width);

  // One integration, snapshot at every requested time. A failure poisons
  // that time and all later ones.
  IntegrateOptions iopt;
  iopt.spill_tolerance = config.tolerances.spill;
  std::vector<std::optional<LatticeState>> snapshots(config.times.size());
  std::vector<std::string> sim_errors(config.times.size());
  std::vector<double> sim_seconds(config.times.size(), 0.0);
  {
    LatticeState state = initial;
    std::string failure;
    for (std::size_t k = 0; k < config.times.size(); ++k) {
      if (!failure.empty()) {
        sim_errors[k] = failure;
        continue;
      }
      const auto start = std::chrono::steady_clock::now();
      try {
        state = integrate(state, config.times[k], config.dt, iopt);
        snapshots[k] = state;
      } catch (const Error& e) {
        failure = e.what();
        sim_errors[k] = failure;
      }
      sim_seconds[k] = seconds_since(start);
    }
  }

  AsymptoticOptions aopt;
  aopt.convention = config.sign_convention;
  aopt.quadrature.abs_tol = config.tolerances.quadrature;
  aopt.realness_calibration = config.tolerances.realness_calibration;
  const AsymptoticEvaluator evaluator(initial, aopt);

  const std::size_t nt = config.times.size();
  std::vector<ComparisonRecord> rows(config.rays.size() * nt);
  parallel_for(rows.size(), config.threads, [&](std::size_t idx) {
    const double v = config.rays[idx / nt];
    const std::size_t k = idx % nt;
    const double t = config.times[k];
    ComparisonRecord& rec = rows[idx];
    rec.t = t;
    rec.v = v;
    rec.n = std::llround(v * t);
    const auto start = std::chrono::steady_clock::now();
    try {
      if (!snapshots[k]) throw SpillError(sim_errors[k]);
      rec.q_direct = snapshots[k]->at(rec.n);
      const AsymptoticResult res = evaluator.evaluate(rec.n, t);
      rec.q_asym = res.q_asym;
      rec.imag_residual = res.imag_residual;
      for (const cplx& c : res.contributions) rec.amplitude += std::abs(c);
      rec.amplitude /= std::abs(res.delta_at_zero);
      rec.abs_err = std::abs(rec.q_direct - rec.q_asym);
      rec.scaled_err = rec.abs_err * t / std::log(t);
    } catch (const Error& e) {
      rec.failed = true;
      rec.error = e.what();
      rec.q_direct = rec.q_asym = rec.abs_err = rec.scaled_err = rec.imag_residual = kNaN;
    }
    rec.wall_seconds = sim_seconds[k] + seconds_since(start);
  });
  return rows;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string format_records(std::span<const ComparisonRecord> records, OutputFormat format) {
  std::string out;
  auto fields = [](const ComparisonRecord& r) {
    return std::array<std::string, 8>{std::to_string(r.n),       format_double(r.t),
                                      format_double(r.v),        format_double(r.q_direct),
                                      format_double(r.q_asym),   format_double(r.abs_err),
                                      format_double(r.scaled_err), format_double(r.imag_residual)};
  };
  if (format == OutputFormat::csv) {
    out = "n,t,v,q_direct,q_asym,abs_err,scaled_err,imag_residual\n";
    for (const auto& r : records) {
      const auto f = fields(r);
      for (std::size_t i = 0; i < f.size(); ++i) {
        out += f[i];
        out += (i + 1 < f.size()) ? ',' : '\n';
      }
    }
    return out;
  }
  out = "[";
  for (std::size_t k = 0; k < records.size(); ++k) {
    const auto f = fields(records[k]);
    out += (k == 0) ? "\n  {" : ",\n  {";
    for (std::size_t i = 0; i < f.size(); ++i) {
      const bool finite = f[i] != "nan" && f[i] != "inf" && f[i] != "-inf";
      out += "\"" + std::string(kColumns[i]) + "\": " + (finite ? f[i] : "null");
      if (i + 1 < f.size()) out += ", ";
    }
    out += "}";
  }
  out += records.empty() ? "]\n" : "\n]\n";
  return out;
}

std::vector<ComparisonRecord> parse_records(std::string_view text, OutputFormat format) {
  std::vector<ComparisonRecord> rows;
  auto number = [](const std::string& s) {
    if (s == "nan") return kNaN;
    double x = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
      throw ConfigError("malformed number '" + s + "' in records");
    return x;
  };
  if (format == OutputFormat::csv) {
    std::stringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || line != "n,t,v,q_direct,q_asym,abs_err,scaled_err,imag_residual")
      throw ConfigError("records CSV header mismatch");
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::vector<std::string> cells;
      std::stringstream ls(line);
      std::string cell;
      while (std::getline(ls, cell, ',')) cells.push_back(cell);
      if (cells.size() != 8) throw ConfigError("records CSV row has wrong arity");
      ComparisonRecord r;
      r.n = std::stoll(cells[0]);
      r.t = number(cells[1]);
      r.v = number(cells[2]);
      r.q_direct = number(cells[3]);
      r.q_asym = number(cells[4]);
      r.abs_err = number(cells[5]);
      r.scaled_err = number(cells[6]);
      r.imag_residual = number(cells[7]);
      r.failed = std::isnan(r.q_direct);
      rows.push_back(r);
    }
    return rows;
  }
  const json doc = json::parse(text.begin(), text.end(), nullptr, false);
  if (doc.is_discarded() || !doc.is_array()) throw ConfigError("records JSON must be an array");
  for (const auto& obj : doc) {
    auto num = [&](const char* key) {
      const auto& v = obj.at(key);
      return v.is_null() ? kNaN : v.get<double>();
    };
    ComparisonRecord r;
    r.n = obj.at("n").get<std::int64_t>();
    r.t = num("t");
    r.v = num("v");
    r.q_direct = num("q_direct");
    r.q_asym = num("q_asym");
    r.abs_err = num("abs_err");
    r.scaled_err = num("scaled_err");
    r.imag_residual = num("imag_residual");
    r.failed = std::isnan(r.q_direct);
    rows.push_back(r);
  }
  return rows;
}

void emit(std::span<const ComparisonRecord> records, OutputFormat format, const std::string& path) {
  if (records.empty()) throw ConfigError("no records to emit");
  const std::string text = format_records(records, format);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("failed writing " + path);
}

bool SelfTestReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const SelfTestCheck& c) { return c.pass; });
}

SelfTestReport selftest(const RunConfig& config) {
  constexpr double kPi = std::numbers::pi;
  SelfTestReport report;
  report.convention = config.sign_convention;
  auto add = [&](std::string name, double measured, double threshold) {
    report.checks.push_back({std::move(name), measured <= threshold, measured, threshold});
  };
  QuadratureOptions quad;
  quad.abs_tol = config.tolerances.quadrature;
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);

  // Gamma identities.
  {
    double err = std::abs(complex_gamma(1.0) - 1.0);
    err = std::max(err, std::abs(complex_gamma(0.5) - std::sqrt(kPi)) / std::sqrt(kPi));
    for (double nu : {0.001, 0.01, 0.1, 0.25, 0.5, 1.0}) {
      const double exact = kPi / (nu * std::sinh(kPi * nu));
      err = std::max(err, std::abs(std::norm(complex_gamma(cplx(0.0, nu))) - exact) / exact);
    }
    add("gamma_identities", err, 1e-12);
  }

  // |a|^2 - |b|^2 = c_{-inf} for random 16-site data.
  {
    std::vector<double> q(16);
    for (double& x : q) x = 0.5 * uni(rng);
    const LatticeState state(-8, q);
    const double c_inf = conserved_c_inf(state);
    double err = 0.0;
    for (int k = 0; k < 256; ++k) {
      const auto z = UnitCirclePoint::from_angle(-kPi + 2.0 * kPi * (k + 1) / 256.0);
      const auto s = scattering_coefficients(state, z);
      err = std::max(err, std::abs(std::norm(s.a) - std::norm(s.b) - c_inf));
    }
    add("unitarity", err, 1e-10);
  }

  // Stationary-point identities over random rays.
  {
    double first = 0.0, scaled = 0.0;
    std::uniform_real_distribution<double> time(10.0, 1000.0);
    for (int i = 0; i < 100; ++i) {
      const double t = time(rng);
      const auto n = static_cast<std::int64_t>(std::llround(1.8 * uni(rng) * t));
      const auto set = stationary_points({n, t});
      for (int j = 1; j <= 4; ++j) {
        const auto k = static_cast<std::size_t>(j - 1);
        first = std::max(first, std::abs(phase_derivative(set.S(j), set.ray)));
        const cplx target = (j % 2 == 1 ? 1.0 : -1.0) * cplx(0.0, 0.5);
        scaled = std::max(scaled, std::abs(set.phi_dd[k] * set.beta[k] * set.beta[k] - target));
      }
    }
    add("phase_first_derivative", first, 1e-10);
    add("phase_scaling_identity", scaled, 1e-12);
  }

  // delta = prod delta_j off the circle, reference profile.
  const LatticeState reference = InitialProfile{}.realize(4);
  const ReflectionFunction ref_r(staggered(reference));
  const ReflectionEvaluator r_eval = [&](cplx z) { return ref_r(z); };
  {
    const auto set = stationary_points({50, 100.0});
    double err = 0.0;
    for (double radius : {0.3, 0.6, 1.5, 3.0}) {
      for (int k = 0; k < 5; ++k) {
        const cplx z = std::polar(radius, 0.3 + 2.0 * kPi * k / 5.0);
        cplx prod = 1.0;
        for (int j = 1; j <= 4; ++j) prod *= delta_factor(r_eval, set, j, z, quad);
        err = std::max(err, std::abs(delta_at(r_eval, set, z, quad) - prod));
      }
    }
    add("delta_product_identity", err, 1e-9);
  }

  // delta(0) for constant |r| on the n = 0 ray.
  {
    const auto set = stationary_points({0, 100.0});
    const double c = 0.3;
    const double err = std::abs(delta_at(r_eval, set, 0.0, quad) - 1.0 / std::sqrt(1.0 - c * c));
    add("delta_zero_closed_form", err, 1e-9);
  }

  // |(m_1^j)_{12}| = sqrt(nu).
  {
    double err = 0.0;
    for (double nu : {0.001, 0.01, 0.1, 0.5}) {
      const double mod = std::sqrt(1.0 - std::exp(-2.0 * kPi * nu));
      for (int j = 1; j <= 4; ++j) {
        const cplx r = std::polar(mod, 0.7 * j);
        err = std::max(err, std::abs(std::abs(m1_entry(nu, r, j, config.sign_convention)) - std::sqrt(nu)));
      }
    }
    add("m1_modulus_identity", err, 1e-10);
  }

  // RK4 order and c_{-inf} drift on the reference profile.
  {
    const LatticeState start = InitialProfile{}.realize(50);
    auto error_at = [&](double h) {
      const auto coarse = integrate(start, 5.0, h);
      const auto fine = integrate(start, 5.0, h / 8.0);
      double e = 0.0;
      for (std::size_t i = 0; i < coarse.size(); ++i)
        e = std::max(e, std::abs(coarse.values()[i] - fine.values()[i]));
      return e;
    };
    const double order = std::log2(error_at(0.1) / error_at(0.05));
    report.checks.push_back({"rk4_order", order >= 3.7 && order <= 4.3, order, 4.0});
    const LatticeState wide = InitialProfile{}.realize(200);
    const auto end = integrate(wide, 50.0, 0.01);
    add("c_inf_drift", std::abs(conserved_c_inf(end) - conserved_c_inf(wide)), 1e-8);
  }

  // Sign-convention audit: realness of the leading term at t = 800 on v = 0.5.
  {
    const double t = 800.0;
    const std::int64_t n = 400;
    auto residual = [&](SignConvention conv) {
      AsymptoticOptions opt;
      opt.convention = conv;
      opt.quadrature = quad;
      opt.check_realness = false;
      return AsymptoticEvaluator(reference, opt).evaluate(n, t).imag_residual * std::sqrt(t);
    };
    const SignConvention other = config.sign_convention == SignConvention::per_parity
                                     ? SignConvention::combined
                                     : SignConvention::per_parity;
    add("realness_selected_" + to_string(config.sign_convention), residual(config.sign_convention),
        config.tolerances.realness);
    const double other_residual = residual(other);
    report.checks.push_back({"realness_rejected_" + to_string(other),
                             other_residual > config.tolerances.realness, other_residual,
                             config.tolerances.realness});
  }
  return report;
}

std::string report_to_json(const SelfTestReport& report) {
  json doc;
  doc["sign_convention"] = to_string(report.convention);
  doc["pass"] = report.all_pass();
  doc["checks"] = json::array();
  for (const auto& c : report.checks)
    doc["checks"].push_back(
        {{"name", c.name}, {"pass", c.pass}, {"measured", c.measured}, {"threshold", c.threshold}});
  return doc.dump(2);
}

}  // namespace dmkdv
