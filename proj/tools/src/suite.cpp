#include "suite.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include "hhlab/error.hpp"
#include "hhlab/sharpness.hpp"

namespace hhlab::suite {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr const char* kVersion = "0.1.0";

[[noreturn]] void config_error(const std::string& field, const std::string& message) {
  raise(ErrorKind::ConfigError, field + ": " + message);
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string index(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

double read_number(const json& v, const std::string& field) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
  }
  config_error(field, "expected a number");
}

const json* find(const json& obj, const std::string& key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double require_number(const json& obj, const std::string& path, const std::string& key) {
  const json* v = find(obj, key);
  if (!v) config_error(join(path, key), "missing");
  return read_number(*v, join(path, key));
}

std::optional<double> optional_number(const json& obj, const std::string& path, const std::string& key) {
  const json* v = find(obj, key);
  if (!v) return std::nullopt;
  return read_number(*v, join(path, key));
}

std::string require_string(const json& obj, const std::string& path, const std::string& key) {
  const json* v = find(obj, key);
  if (!v || !v->is_string()) config_error(join(path, key), "expected a string");
  return v->get<std::string>();
}

std::vector<double> number_list(const json& v, const std::string& path) {
  if (!v.is_array()) config_error(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(read_number(v[i], index(path, i)));
  return out;
}

void require_object(const json& v, const std::string& path) {
  if (!v.is_object()) config_error(path, "expected an object");
}

KernelSpec parse_kernel(const json& v, const std::string& path) {
  require_object(v, path);
  KernelSpec k;
  k.name = require_string(v, path, "name");
  k.lambda = require_number(v, path, "lambda");
  k.beta = optional_number(v, path, "beta");
  k.at_zero = optional_number(v, path, "at_zero");
  k.at_infinity = optional_number(v, path, "at_infinity");
  return k;
}

TestFunction parse_function(const json& v, const std::string& path) {
  require_object(v, path);
  const std::string kind = require_string(v, path, "kind");
  if (kind == "pieces") {
    const json* list = find(v, "pieces");
    if (!list || !list->is_array()) config_error(join(path, "pieces"), "expected an array of [lo, hi, c, a, b]");
    std::vector<Piece> pieces;
    for (std::size_t i = 0; i < list->size(); ++i) {
      const std::string ip = index(join(path, "pieces"), i);
      const json& e = (*list)[i];
      if (!e.is_array() || e.size() != 5) config_error(ip, "expected [lo, hi, c, a, b]");
      pieces.push_back({read_number(e[0], ip), read_number(e[1], ip), read_number(e[2], ip), read_number(e[3], ip),
                        read_number(e[4], ip)});
    }
    return TestFunction::from_pieces(std::move(pieces));
  }
  const double c = optional_number(v, path, "c").value_or(1.0);
  if (kind == "indicator") return TestFunction::indicator(require_number(v, path, "lo"), require_number(v, path, "hi"), c);
  if (kind == "exponential") return TestFunction::exponential(require_number(v, path, "rate"), c);
  if (kind == "power") {
    return TestFunction::power(c, require_number(v, path, "a"), require_number(v, path, "lo"),
                               optional_number(v, path, "hi").value_or(kInf));
  }
  config_error(join(path, "kind"), "unknown function kind '" + kind + "'");
}

TestSequence parse_sequence(const json& v, const std::string& path) {
  require_object(v, path);
  const std::string kind = require_string(v, path, "kind");
  std::vector<double> prefix;
  if (const json* t = find(v, "prefix")) prefix = number_list(*t, join(path, "prefix"));
  if (kind == "finite") {
    const json* t = find(v, "terms");
    if (!t) config_error(join(path, "terms"), "missing");
    return TestSequence::finite(number_list(*t, join(path, "terms")));
  }
  if (kind == "power") {
    return TestSequence::power(require_number(v, path, "c"), require_number(v, path, "gamma"), std::move(prefix));
  }
  if (kind == "geometric") {
    return TestSequence::geometric(require_number(v, path, "c"), require_number(v, path, "rho"), std::move(prefix));
  }
  config_error(join(path, "kind"), "unknown sequence kind '" + kind + "'");
}

std::optional<FormKind> parse_form(const json& v, const std::string& path) {
  const json* f = find(v, "form");
  if (!f) return std::nullopt;
  const std::string s = f->is_string() ? f->get<std::string>() : "";
  if (s == "rs") return FormKind::RS;
  if (s == "alpha-beta") return FormKind::AlphaBeta;
  if (s == "weighted") return FormKind::Weighted;
  config_error(join(path, "form"), "expected rs, alpha-beta or weighted");
}

std::optional<Direction> parse_cumulative(const json& v, const std::string& path) {
  const json* c = find(v, "cumulative");
  if (!c) return std::nullopt;
  const std::string s = c->is_string() ? c->get<std::string>() : "";
  if (s == "forward") return Direction::Forward;
  if (s == "tail") return Direction::Tail;
  config_error(join(path, "cumulative"), "expected forward or tail");
}

// Message of a library error without its "Kind: " prefix.
std::string bare_message(const Error& e) {
  const std::string what = e.what();
  const std::string prefix = std::string(to_string(e.kind())) + ": ";
  return what.rfind(prefix, 0) == 0 ? what.substr(prefix.size()) : what;
}

// Runs fn and rethrows any library error as a ConfigError for the given field.
template <typename Fn>
auto as_config(const std::string& field, Fn fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ConfigError) throw;
    config_error(field, bare_message(e));
  }
}

Instance parse_check(const json& v, const std::string& path) {
  require_object(v, path);
  Instance inst;
  const std::string type = require_string(v, path, "type");
  const auto kind = check_kind_from_name(type);
  if (!kind) config_error(join(path, "type"), "unknown check type '" + type + "'");
  inst.kind = *kind;
  inst.label = find(v, "label") ? require_string(v, path, "label") : type;
  const double p = require_number(v, path, "p");
  const bool hardy = inst.kind == CheckKind::HardyIntegral || inst.kind == CheckKind::HardyDiscrete;
  if (hardy) {
    inst.cfg = as_config(join(path, "p"), [&] { return ExponentConfig::plain(p, 1.0); });
    const std::string dir = find(v, "direction") ? require_string(v, path, "direction") : "forward";
    if (dir != "forward" && dir != "reverse") config_error(join(path, "direction"), "expected forward or reverse");
    inst.hardy = dir == "forward" ? HardyDirection::Forward : HardyDirection::Reverse;
  } else {
    const json* k = find(v, "kernel");
    if (!k) config_error(join(path, "kernel"), "missing");
    inst.kernel = parse_kernel(*k, join(path, "kernel"));
    const double lambda = inst.kernel.lambda;
    const auto r = optional_number(v, path, "r");
    const auto alpha = optional_number(v, path, "alpha");
    const auto beta = optional_number(v, path, "beta");
    inst.cfg = as_config(path, [&] {
      if (r) return ExponentConfig::rs(p, *r, lambda);
      if (alpha || beta) return ExponentConfig::alpha_beta(p, lambda, alpha, beta);
      return ExponentConfig::plain(p, lambda);
    });
    inst.form = parse_form(v, path);
    inst.cumulative = parse_cumulative(v, path);
  }
  auto need_function = [&](const char* key) {
    const json* f = find(v, key);
    if (!f) config_error(join(path, key), "missing");
    return as_config(join(path, key), [&] { return parse_function(*f, join(path, key)); });
  };
  auto need_sequence = [&](const char* key) {
    const json* f = find(v, key);
    if (!f) config_error(join(path, key), "missing");
    return as_config(join(path, key), [&] { return parse_sequence(*f, join(path, key)); });
  };
  switch (inst.kind) {
    case CheckKind::BilinearIntegral:
      inst.f = need_function("f");
      inst.g = need_function("g");
      break;
    case CheckKind::EquivalentIntegral:
    case CheckKind::HardyIntegral:
      inst.f = need_function("f");
      break;
    case CheckKind::BilinearDiscrete:
      inst.a = need_sequence("a");
      inst.b = need_sequence("b");
      break;
    case CheckKind::EquivalentDiscrete:
    case CheckKind::HardyDiscrete:
      inst.a = need_sequence("a");
      break;
  }
  return inst;
}

json quantity(const Quantity& q) {
  return json{{"value", number(q.value)},
              {"lower", number(q.lower)},
              {"upper", number(q.upper)},
              {"provenance", q.provenance}};
}

json kernel_json(const KernelSpec& k) {
  json j{{"name", k.name}, {"lambda", number(k.lambda)}};
  if (k.beta) j["beta"] = number(*k.beta);
  if (k.at_zero) j["at_zero"] = number(*k.at_zero);
  if (k.at_infinity) j["at_infinity"] = number(*k.at_infinity);
  return j;
}

json config_json(const ExponentConfig& c) {
  json j{{"p", number(c.p)}, {"q", number(c.q)}, {"lambda", number(c.lambda)},
         {"regime", c.regime == Regime::Forward ? "forward" : "reverse"}};
  if (c.r) j["r"] = number(*c.r);
  if (c.s) j["s"] = number(*c.s);
  if (c.alpha) j["alpha"] = number(*c.alpha);
  if (c.beta) j["beta"] = number(*c.beta);
  return j;
}

json instance_inputs(const Instance& inst) {
  json j{{"type", std::string(to_string(inst.kind))}, {"config", config_json(inst.cfg)}};
  const bool hardy = inst.kind == CheckKind::HardyIntegral || inst.kind == CheckKind::HardyDiscrete;
  if (hardy) {
    j["direction"] = inst.hardy == HardyDirection::Forward ? "forward" : "reverse";
  } else {
    j["kernel"] = kernel_json(inst.kernel);
  }
  if (is_discrete(inst.kind)) {
    j["a"] = inst.a.describe();
    if (inst.kind == CheckKind::BilinearDiscrete) j["b"] = inst.b.describe();
  } else {
    j["f"] = inst.f.describe();
    if (inst.kind == CheckKind::BilinearIntegral) j["g"] = inst.g.describe();
  }
  return j;
}

json report_json(const VerificationReport& rep) {
  json j{{"check_id", rep.check_id},
         {"direction", std::string(to_string(rep.direction))},
         {"verdict", std::string(to_string(rep.verdict))},
         {"lhs", quantity(rep.lhs)},
         {"rhs", quantity(rep.rhs)},
         {"constant", quantity(rep.constant)},
         {"constant_formula", rep.constant_formula},
         {"ratio", number(rep.ratio)},
         {"margin", number(rep.margin)}};
  json norms = json::object();
  for (const auto& [name, q] : rep.norms) norms[name] = quantity(q);
  j["norms"] = norms;
  if (rep.printed) {
    j["printed"] = json{{"formula", rep.printed->formula},
                        {"constant", quantity(rep.printed->constant)},
                        {"rhs", quantity(rep.printed->rhs)},
                        {"ratio", number(rep.printed->ratio)},
                        {"verdict", std::string(to_string(rep.printed->verdict))}};
  }
  if (rep.chain) {
    j["chain"] = json{{"bilinear", quantity(rep.chain->bilinear)},
                      {"bound", quantity(rep.chain->bound)},
                      {"holds", rep.chain->holds}};
  }
  j["notes"] = rep.notes;
  return j;
}

json error_json(const std::string& record, const std::string& label, const std::exception& e) {
  const auto* err = dynamic_cast<const Error*>(&e);
  return json{{"record", record},
              {"label", label},
              {"status", "error"},
              {"error_kind", err ? std::string(to_string(err->kind())) : "internal"},
              {"message", e.what()}};
}

KernelSpec builtin_spec(const char* name, double lambda, std::optional<double> beta = std::nullopt) {
  return {name, lambda, beta, std::nullopt, std::nullopt};
}

std::vector<ConstantEntry> default_constants() {
  return {
      {builtin_spec("sum-power", 1.0), 0.5},         {builtin_spec("max-power", 1.0), 0.5},
      {builtin_spec("abs-diff", 0.5), 0.2},          {builtin_spec("log-ratio", 1.0), 0.5},
      {builtin_spec("diff-max", 1.0, 0.5), 0.4},     {builtin_spec("min-diff", 0.6, 0.7), 0.3},
      {builtin_spec("pow-diff-max", 1.0, 1.0), 0.5}, {builtin_spec("abslog-max", 1.0), 0.5},
      {builtin_spec("abslog-sumpow", 1.0), 0.5},
  };
}

std::vector<SharpnessEntry> default_sharpness() {
  const std::vector<double> eps{1e-1, 3e-2, 1e-2, 3e-3, 1e-3};
  return {{builtin_spec("sum-power", 1.0), 2.0, 0.5, eps}, {builtin_spec("max-power", 1.0), 2.0, 0.5, eps}};
}

std::vector<Instance> default_checks() {
  std::vector<Instance> out;
  Instance bil;
  bil.label = "bilinear-sum-power";
  bil.kind = CheckKind::BilinearIntegral;
  bil.kernel = builtin_spec("sum-power", 2.0);
  bil.cfg = ExponentConfig::rs(2.0, 1.0, 2.0);
  bil.f = TestFunction::indicator(0.0, 1.0);
  bil.g = bil.f;
  out.push_back(bil);

  Instance eq = bil;
  eq.label = "equivalent-sum-power";
  eq.kind = CheckKind::EquivalentIntegral;
  eq.kernel = builtin_spec("sum-power", 1.0);
  eq.cfg = ExponentConfig::rs(2.0, 0.5, 1.0);
  out.push_back(eq);

  Instance rev;
  rev.label = "bilinear-max-power-reverse";
  rev.kind = CheckKind::BilinearIntegral;
  rev.kernel = builtin_spec("max-power", 1.0);
  rev.cfg = ExponentConfig::rs(0.5, 0.5, 1.0);
  rev.f = TestFunction::exponential(1.0);
  rev.g = rev.f;
  out.push_back(rev);

  Instance disc;
  disc.label = "discrete-max-power";
  disc.kind = CheckKind::BilinearDiscrete;
  disc.kernel = builtin_spec("max-power", 1.0);
  disc.cfg = ExponentConfig::rs(2.0, 0.5, 1.0);
  disc.a = TestSequence::finite({1.0});
  disc.b = disc.a;
  out.push_back(disc);

  Instance hardy;
  hardy.label = "hardy-indicator";
  hardy.kind = CheckKind::HardyIntegral;
  hardy.cfg = ExponentConfig::plain(2.0, 1.0);
  hardy.f = TestFunction::indicator(0.0, 1.0);
  out.push_back(hardy);
  return out;
}

// Evaluates jobs on a small thread pool; results keep job order.
std::vector<json> evaluate(const std::vector<std::function<json()>>& jobs, unsigned workers) {
  std::vector<json> results(jobs.size());
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(jobs.size(), 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < jobs.size(); ++i) results[i] = jobs[i]();
    return results;
  }
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < jobs.size(); i += workers) results[i] = jobs[i]();
    });
  }
  for (auto& t : pool) t.join();
  return results;
}

std::string csv_field(const json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
      if (c == '"') out += '"';
      out += c;
    }
    return out + "\"";
  }
  return v.dump();
}

}  // namespace

std::optional<Command> command_from_name(const std::string& name) {
  if (name == "constants") return Command::Constants;
  if (name == "verify") return Command::Verify;
  if (name == "sharpness") return Command::Sharpness;
  if (name == "suite") return Command::Suite;
  return std::nullopt;
}

std::string command_name(Command c) {
  switch (c) {
    case Command::Constants: return "constants";
    case Command::Verify: return "verify";
    case Command::Sharpness: return "sharpness";
    case Command::Suite: return "suite";
  }
  return "suite";
}

json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

RunConfig default_config(Command command) {
  RunConfig cfg;
  cfg.command = command;
  const bool suite = command == Command::Suite;
  if (suite || command == Command::Constants) {
    cfg.constants = default_constants();
    cfg.alternating_series = true;
  }
  if (suite || command == Command::Verify) cfg.checks = default_checks();
  if (suite || command == Command::Sharpness) cfg.sharpness = default_sharpness();
  if (suite) cfg.random = RandomBlock{all_families(), 1, {}};
  return cfg;
}

RunConfig parse_config(const json& doc, Command command) {
  if (!doc.is_object()) config_error("config", "expected a JSON object");
  RunConfig cfg;
  cfg.command = command;
  if (const json* c = find(doc, "command")) {
    const auto named = c->is_string() ? command_from_name(c->get<std::string>()) : std::nullopt;
    if (!named) config_error("command", "expected constants, verify, sharpness or suite");
    if (*named != command) {
      config_error("command", "config declares '" + c->get<std::string>() + "' but '" + command_name(command) +
                                  "' was requested");
    }
  }
  if (const json* s = find(doc, "seed")) {
    if (!s->is_number_unsigned()) config_error("seed", "expected a nonnegative integer");
    cfg.seed = s->get<std::uint64_t>();
  }
  if (auto t = optional_number(doc, "", "tolerance")) {
    if (!(*t > 0.0 && *t < 1.0)) config_error("tolerance", "expected a value in (0, 1)");
    cfg.tolerance = *t;
  }
  if (const json* n = find(doc, "truncation")) {
    if (!n->is_number_integer() || n->get<long>() < 10) config_error("truncation", "expected an integer >= 10");
    cfg.truncation = n->get<long>();
  }
  if (const json* f = find(doc, "format")) {
    const std::string s = f->is_string() ? f->get<std::string>() : "";
    if (s != "json" && s != "csv") config_error("format", "expected json or csv");
    cfg.format = s == "csv" ? Format::Csv : Format::Json;
  }
  if (const json* list = find(doc, "constants")) {
    if (!list->is_array()) config_error("constants", "expected an array");
    for (std::size_t i = 0; i < list->size(); ++i) {
      const std::string path = index("constants", i);
      require_object((*list)[i], path);
      const json* k = find((*list)[i], "kernel");
      if (!k) config_error(join(path, "kernel"), "missing");
      cfg.constants.push_back({parse_kernel(*k, join(path, "kernel")), require_number((*list)[i], path, "r")});
    }
  }
  if (const json* a = find(doc, "alternating_series")) {
    if (!a->is_boolean()) config_error("alternating_series", "expected a boolean");
    cfg.alternating_series = a->get<bool>();
  }
  if (const json* list = find(doc, "checks")) {
    if (!list->is_array()) config_error("checks", "expected an array");
    for (std::size_t i = 0; i < list->size(); ++i) cfg.checks.push_back(parse_check((*list)[i], index("checks", i)));
  }
  if (const json* list = find(doc, "sharpness")) {
    if (!list->is_array()) config_error("sharpness", "expected an array");
    for (std::size_t i = 0; i < list->size(); ++i) {
      const std::string path = index("sharpness", i);
      const json& e = (*list)[i];
      require_object(e, path);
      const json* k = find(e, "kernel");
      if (!k) config_error(join(path, "kernel"), "missing");
      SharpnessEntry entry{parse_kernel(*k, join(path, "kernel")), require_number(e, path, "p"),
                           require_number(e, path, "r"), {}};
      const json* eps = find(e, "epsilons");
      entry.epsilons = eps ? number_list(*eps, join(path, "epsilons")) : default_sharpness().front().epsilons;
      cfg.sharpness.push_back(std::move(entry));
    }
  }
  if (const json* r = find(doc, "random")) {
    require_object(*r, "random");
    RandomBlock block;
    if (const json* fams = find(*r, "families")) {
      if (!fams->is_array()) config_error("random.families", "expected an array of family names");
      for (std::size_t i = 0; i < fams->size(); ++i) {
        const std::string name = (*fams)[i].is_string() ? (*fams)[i].get<std::string>() : "";
        const auto fam = family_from_name(name);
        if (!fam) config_error(index("random.families", i), "unknown family '" + name + "'");
        block.families.push_back(*fam);
      }
    } else {
      block.families = all_families();
    }
    if (const json* d = find(*r, "draws")) {
      if (!d->is_number_integer() || d->get<int>() < 1) config_error("random.draws", "expected a positive integer");
      block.draws = d->get<int>();
    }
    if (const json* e = find(*r, "exponents")) block.exponents = number_list(*e, "random.exponents");
    cfg.random = block;
  }
  return cfg;
}

void validate(const RunConfig& cfg) {
  for (std::size_t i = 0; i < cfg.constants.size(); ++i) {
    const std::string path = index("constants", i);
    const Kernel k = as_config(join(path, "kernel"), [&] { return make_kernel(cfg.constants[i].kernel); });
    const double r = cfg.constants[i].r;
    if (!(r > 0.0 && r < k.lambda())) config_error(join(path, "r"), "expected 0 < r < lambda");
  }
  for (std::size_t i = 0; i < cfg.checks.size(); ++i) {
    const Instance& inst = cfg.checks[i];
    const std::string path = index("checks", i);
    if (inst.kind == CheckKind::HardyIntegral || inst.kind == CheckKind::HardyDiscrete) {
      if (!(inst.cfg.p > 0.0) || inst.cfg.p == 1.0) config_error(join(path, "p"), "expected p > 0 and p != 1");
      continue;
    }
    as_config(join(path, "kernel"), [&] { return make_kernel(inst.kernel); });
    VerifyOptions opt;
    opt.form = inst.form;
    const FormKind form = as_config(join(path, "form"), [&] { return resolve_form(inst.cfg, opt); });
    as_config(join(path, "cumulative"), [&] { return required_cumulative(inst.cfg, form, inst.cumulative); });
  }
  for (std::size_t i = 0; i < cfg.sharpness.size(); ++i) {
    const SharpnessEntry& e = cfg.sharpness[i];
    const std::string path = index("sharpness", i);
    const Kernel k = as_config(join(path, "kernel"), [&] { return make_kernel(e.kernel); });
    as_config(path, [&] { return ExponentConfig::rs(e.p, e.r, k.lambda()); });
    if (!(e.p > 1.0)) config_error(join(path, "p"), "sharpness probe requires p > 1");
    for (std::size_t j = 0; j < e.epsilons.size(); ++j) {
      as_config(index(join(path, "epsilons"), j), [&] { return extremal_pair(e.epsilons[j], e.p); });
    }
  }
}

RunOutcome run(const RunConfig& cfg, unsigned workers) {
  VerifyOptions options;
  options.rel_tol = cfg.tolerance;
  options.truncation = cfg.truncation;

  std::vector<std::function<json()>> jobs;
  for (const ConstantEntry& c : cfg.constants) {
    jobs.push_back([c, tol = cfg.tolerance] {
      try {
        const Kernel k = make_kernel(c.kernel);
        const ConstantReport rep = kernel_constant(k, c.r, std::min(tol, 1e-10));
        json j{{"record", "constant"},
               {"label", k.name()},
               {"kernel", kernel_json(c.kernel)},
               {"r", number(c.r)},
               {"numeric", json{{"value", number(rep.numeric.value)},
                                {"error", number(rep.numeric.error_estimate)},
                                {"provenance", "quadrature"}}}};
        if (rep.closed_form) {
          j["closed_form"] = json{{"value", number(*rep.closed_form)}, {"id", rep.closed_form_id}};
        }
        if (rep.agreement) j["agreement"] = number(*rep.agreement);
        if (rep.printed) j["printed"] = json{{"value", number(*rep.printed)}, {"id", rep.printed_id}};
        j["printed_mismatch"] = rep.printed_mismatch;
        j["status"] = "ok";
        return j;
      } catch (const std::exception& e) {
        return error_json("constant", c.kernel.name, e);
      }
    });
  }
  if (cfg.alternating_series) {
    jobs.push_back([] {
      try {
        const AlternatingSeriesReport rep = alternating_series_constant(1.0, 0.5);
        return json{{"record", "series"},
                    {"label", "abslog-sumpow-series"},
                    {"lambda", 1.0},
                    {"r", 0.5},
                    {"printed_series", number(rep.printed_series)},
                    {"corrected_series", number(rep.corrected_series)},
                    {"quadrature", json{{"value", number(rep.quadrature.value)},
                                        {"error", number(rep.quadrature.error_estimate)}}},
                    {"discrepancy", number(rep.discrepancy)},
                    {"flagged", rep.flagged},
                    {"status", "ok"}};
      } catch (const std::exception& e) {
        return error_json("series", "abslog-sumpow-series", e);
      }
    });
  }

  std::vector<Instance> instances = cfg.checks;
  if (cfg.random) {
    Rng rng(cfg.seed);
    for (Family fam : cfg.random->families) {
      const std::vector<double> ps = cfg.random->exponents.empty() ? default_exponents(fam) : cfg.random->exponents;
      for (double p : ps) {
        for (int d = 0; d < cfg.random->draws; ++d) {
          Instance inst = draw_instance(rng, fam, p);
          inst.label = std::string(to_string(fam)) + "/p=" + json(p).dump() + "/" + std::to_string(d);
          instances.push_back(std::move(inst));
        }
      }
    }
  }
  for (const Instance& inst : instances) {
    jobs.push_back([inst, options] {
      try {
        const VerificationReport rep = run_instance(inst, options);
        json j{{"record", "verification"}, {"label", inst.label}, {"inputs", instance_inputs(inst)}};
        j.update(report_json(rep));
        j["status"] = "ok";
        return j;
      } catch (const std::exception& e) {
        json j = error_json("verification", inst.label, e);
        j["inputs"] = instance_inputs(inst);
        return j;
      }
    });
  }

  for (const SharpnessEntry& e : cfg.sharpness) {
    jobs.push_back([e, tol = cfg.tolerance] {
      const std::string label = e.kernel.name + "/p=" + json(e.p).dump();
      try {
        const Kernel k = make_kernel(e.kernel);
        const ExponentConfig c = ExponentConfig::rs(e.p, e.r, k.lambda());
        const SweepResult sw = sharpness_sweep(k, c, e.epsilons, std::min(tol, 1e-10));
        json points = json::array();
        bool exceeds = false;
        bool monotone = true;
        for (std::size_t i = 0; i < sw.points.size(); ++i) {
          const SweepPoint& pt = sw.points[i];
          exceeds = exceeds || pt.ratio > sw.constant + pt.ratio_error;
          if (i > 0 && sw.points[i].epsilon < sw.points[i - 1].epsilon) {
            monotone = monotone && pt.ratio + pt.ratio_error >= sw.points[i - 1].ratio;
          }
          points.push_back(json{{"epsilon", number(pt.epsilon)},
                                {"ratio", number(pt.ratio)},
                                {"ratio_error", number(pt.ratio_error)},
                                {"lhs", number(pt.lhs)},
                                {"lower_chain", number(pt.lower_chain)},
                                {"eps_I1", number(pt.eps_I1)}});
        }
        return json{{"record", "sharpness"},
                    {"label", label},
                    {"kernel", kernel_json(e.kernel)},
                    {"config", config_json(c)},
                    {"constant", number(sw.constant)},
                    {"constant_formula", "pq k(r)"},
                    {"points", points},
                    {"monotone", monotone},
                    {"verdict", exceeds ? "violated" : "holds"},
                    {"status", "ok"}};
      } catch (const std::exception& ex) {
        return error_json("sharpness", label, ex);
      }
    });
  }

  RunOutcome out;
  out.records.push_back(json{{"record", "header"},
                             {"tool", "hhlab"},
                             {"version", kVersion},
                             {"command", command_name(cfg.command)},
                             {"seed", cfg.seed},
                             {"tolerance", cfg.tolerance},
                             {"truncation", cfg.truncation}});
  for (json& j : evaluate(jobs, workers)) {
    if (j.value("status", "") == "error") ++out.errors;
    const std::string verdict = j.value("verdict", "");
    const bool chain_failed = j.contains("chain") && !j["chain"].value("holds", true);
    if (verdict == "violated" || chain_failed) ++out.violated;
    out.records.push_back(std::move(j));
  }
  out.records.push_back(json{{"record", "summary"},
                             {"checks", out.records.size() - 1},
                             {"errors", out.errors},
                             {"violated", out.violated},
                             {"exit_code", out.exit_code()}});
  return out;
}

void write_jsonl(const RunOutcome& outcome, std::ostream& out) {
  for (const json& j : outcome.records) out << j.dump() << '\n';
}

void write_csv(const RunOutcome& outcome, std::ostream& out) {
  const char* columns[] = {"record", "label", "check_id", "status", "verdict", "lhs", "rhs", "ratio", "margin"};
  for (std::size_t i = 0; i < std::size(columns); ++i) out << (i ? "," : "") << columns[i];
  out << '\n';
  for (const json& j : outcome.records) {
    const std::string record = j.value("record", "");
    if (record == "header" || record == "summary") continue;
    auto get = [&](const char* key) -> json {
      if (!j.contains(key)) return nullptr;
      const json& v = j[key];
      return v.is_object() && v.contains("value") ? v["value"] : v;
    };
    json lhs = get("lhs");
    json rhs = get("rhs");
    json ratio = get("ratio");
    if (record == "constant") {
      lhs = get("numeric");
      if (j.contains("closed_form")) rhs = j["closed_form"]["value"];
      ratio = get("agreement");
    }
    const json row[] = {record, get("label"), get("check_id"), get("status"), get("verdict"), lhs, rhs, ratio,
                        get("margin")};
    for (std::size_t i = 0; i < std::size(row); ++i) out << (i ? "," : "") << csv_field(row[i]);
    out << '\n';
  }
}

}  // namespace hhlab::suite
