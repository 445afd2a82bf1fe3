// germlab command line: one subcommand per library operation, JSON (or CSV
// for scans) on --out or stdout, and a manifest echoing the run config.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "germlab/json_io.hpp"

using namespace germlab;

namespace {

constexpr int kUsage = 64;
constexpr int kDomain = 2;

struct Config {
  std::string out;
  std::string precision = "float64";
  std::uint64_t seed = 1;

  std::string pq = "0/1";
  int order = 16;
  std::string kind = "att";
  std::string grid = "8x8";
  int random = 0;
  double height = 0;
  int samples = 16;
  std::string germ_path;
  int stages = 4;
  double a = 0;
  double b = 0.1;
  std::string side;
  double b_max = 0;
  int b_steps = 0;
  int power = 1;
  std::string f_path;
  std::string g_path;
  int k = 1;
  double r = 1;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::invalid_argument, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Germ load_germ(const std::string& path) {
  try {
    return germ_from_json(json::parse(read_file(path)));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::invalid_argument, path + ": " + e.what());
  }
}

void emit(const Config& cfg, const std::string& payload) {
  if (cfg.out.empty()) {
    std::cout << payload << '\n';
    return;
  }
  std::ofstream out(cfg.out);
  if (!out) throw Error(ErrorCode::invalid_argument, "cannot write " + cfg.out);
  out << payload << '\n';
}

Germ series_op(const Config& cfg, const std::function<Germ(const Germ&)>& f64,
               const std::function<GermExt(const GermExt&)>& ext, const Germ& input) {
  if (backend_from_string(cfg.precision) == Backend::extended) return ext(input.cast<long double>()).cast<double>();
  return f64(input);
}

json run_normalize(const Config& cfg) {
  const auto pq = RationalAngle::parse(cfg.pq);
  return to_json(normalize(AnalyticMap::quadratic_return_map(pq, cfg.order)));
}

std::pair<int, int> parse_grid(const std::string& text) {
  const auto x = text.find('x');
  if (x == std::string::npos) throw Error(ErrorCode::invalid_argument, "grid must be RExIM");
  const int re = std::stoi(text.substr(0, x));
  const int im = std::stoi(text.substr(x + 1));
  if (re < 1 || im < 1) throw Error(ErrorCode::invalid_argument, "grid sizes must be positive");
  return {re, im};
}

json run_fatou(const Config& cfg) {
  const auto pipe = QuadraticPipeline::get(RationalAngle::parse(cfg.pq));
  const auto kind = petal_kind_from_string(cfg.kind == "att" ? "attracting" : cfg.kind == "rep" ? "repelling" : cfg.kind);
  const auto& fc = kind == PetalKind::attracting ? pipe->att : pipe->rep;
  const auto [nre, nim] = parse_grid(cfg.grid);
  const double s = fc.data().s(kind);
  const double sign = kind == PetalKind::attracting ? 1.0 : -1.0;
  std::vector<cplx> zetas;
  for (int i = 0; i < nre; ++i)
    for (int j = 0; j < nim; ++j) zetas.emplace_back(sign * (s + 1.0 + i), j - 0.5 * (nim - 1));
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> re(s + 1.0, s + 1.0 + nre), im(-0.5 * nim, 0.5 * nim);
  for (int i = 0; i < cfg.random; ++i) zetas.emplace_back(sign * re(rng), im(rng));
  json samples = json::array();
  for (const cplx z : zetas) samples.push_back({{"z", to_json(z)}, {"phi", to_json(fc.eval_Phi(z))}});
  return {{"kind", std::string(to_string(kind))}, {"accuracy", fc.accuracy()}, {"samples", samples}};
}

json run_horn(const Config& cfg) {
  const auto pq = RationalAngle::parse(cfg.pq);
  const auto pipe = QuadraticPipeline::get(pq);
  const auto& hm = pipe->horn;
  const double y = std::max(cfg.height, hm.height() + 0.5);
  const double x0 = -hm.strip().t - hm.strip().width;
  double periodicity = 0;
  for (int i = 0; i < cfg.samples; ++i) {
    const cplx w(x0 + hm.strip().width * (i + 0.5) / cfg.samples, y);
    periodicity = std::max(periodicity, std::abs(hm.eval(w + 1.0) - hm.eval(w) - 1.0));
  }
  const auto crit = quadratic_critical_structure(pipe->att, pq);
  json values = json::array();
  for (const cplx v : crit.modded_values) values.push_back(to_json(v));
  return {{"accuracy", hm.accuracy()},
          {"height", y},
          {"periodicity_residual", periodicity},
          {"critical_values_reduced", values}};
}

json run_centralizer(const Config& cfg) {
  return to_json(centralizer_test(RationalAngle::parse(cfg.pq), load_germ(cfg.germ_path)));
}

json run_alpha_seq(const Config& cfg) { return to_json(build_alpha_sequence(cfg.stages)); }

json run_rho(const Config& cfg) { return to_json(rotation_number(ArnoldSystem(cfg.a, cfg.b))); }

std::string run_tongue(const Config& cfg) {
  const auto pq = RationalAngle::parse(cfg.pq);
  if (cfg.b_steps > 0) {
    std::ostringstream csv;
    csv.precision(17);
    csv << "b,a_left,a_right\n";
    for (int i = 0; i < cfg.b_steps; ++i) {
      const double b = cfg.b_steps == 1 ? cfg.b : cfg.b + (cfg.b_max - cfg.b) * i / (cfg.b_steps - 1);
      csv << b << ',' << parabolic_parameter(pq, b, TongueSide::left).a << ','
          << parabolic_parameter(pq, b, TongueSide::right).a << '\n';
    }
    auto s = csv.str();
    s.pop_back();
    return s;
  }
  if (!cfg.side.empty()) return to_json(parabolic_parameter(pq, cfg.b, tongue_side_from_string(cfg.side))).dump(2);
  const auto left = parabolic_parameter(pq, cfg.b, TongueSide::left);
  const auto right = parabolic_parameter(pq, cfg.b, TongueSide::right);
  json j = {{"pq", pq.str()}, {"b", cfg.b}, {"a_left", left.a}, {"a_right", right.a},
            {"left", to_json(left)}, {"right", to_json(right)}};
  return j.dump(2);
}

json run_a_seq(const Config& cfg) { return to_json(a_sequence_builder(cfg.b, cfg.stages)); }

json run_arnold_centralizer(const Config& cfg) {
  const auto pipe = CirclePipeline::at_tongue(RationalAngle::parse(cfg.pq), cfg.b);
  auto v = circle_centralizer_test(pipe, arnold_iterate(pipe.sys, cfg.power));
  json j = to_json(v);
  j["a"] = pipe.sys.a();
  j["b"] = pipe.sys.b();
  return j;
}

json run_compose(const Config& cfg) {
  const auto f = load_germ(cfg.f_path);
  const auto g = load_germ(cfg.g_path);
  const auto h = series_op(
      cfg, [&g](const Germ& x) { return compose(x, g); },
      [&g](const GermExt& x) { return compose(x, g.cast<long double>()); }, f);
  return germ_to_json(h);
}

Germ iterate_input(const Config& cfg) {
  return cfg.germ_path.empty() ? quadratic_germ(RationalAngle::parse(cfg.pq), cfg.order) : load_germ(cfg.germ_path);
}

json run_iterate(const Config& cfg) {
  const int k = cfg.k;
  return germ_to_json(series_op(
      cfg, [k](const Germ& x) { return iterate(x, k); }, [k](const GermExt& x) { return iterate(x, k); },
      iterate_input(cfg)));
}

json run_kset(const Config& cfg) {
  KSetOptions opts;
  opts.order = cfg.order;
  return to_json(k_set_widened(RationalAngle::parse(cfg.pq), cfg.r, opts));
}

void write_manifest(const Config& cfg, const std::string& command, const std::vector<std::string>& argv) {
  const std::string path = (cfg.out.empty() ? std::string("germlab") : cfg.out) + ".manifest.json";
  json m = {{"version", GERMLAB_VERSION},
            {"command", command},
            {"argv", argv},
            {"precision", cfg.precision},
            {"seed", cfg.seed},
            {"out", cfg.out.empty() ? json(nullptr) : json(cfg.out)}};
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::invalid_argument, "cannot write " + path);
  out << m.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  Config cfg;
  CLI::App app{"germlab: parabolic germs, Fatou coordinates, horn maps and the Arnold family"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--out", cfg.out, "output file (default stdout)");
  app.add_option("--precision", cfg.precision, "float64 or extended")->check(CLI::IsMember({"float64", "extended"}));
  app.add_option("--seed", cfg.seed, "seed for random sampling");

  auto sub = [](CLI::App* parent, const std::string& name, const std::string& desc) {
    return parent->add_subcommand(name, desc);
  };

  auto* normalize_cmd = sub(&app, "normalize", "parabolic normalization of Q_{p/q}^q");
  normalize_cmd->add_option("--pq", cfg.pq)->required();
  normalize_cmd->add_option("--order", cfg.order);

  auto* fatou_cmd = sub(&app, "fatou", "sample a Fatou coordinate");
  fatou_cmd->add_option("--pq", cfg.pq)->required();
  fatou_cmd->add_option("--kind", cfg.kind)->check(CLI::IsMember({"att", "rep", "attracting", "repelling"}));
  fatou_cmd->add_option("--grid", cfg.grid, "RExIM");
  fatou_cmd->add_option("--random", cfg.random, "extra random samples");

  auto* horn_cmd = sub(&app, "horn", "horn map periodicity and critical values");
  horn_cmd->add_option("--pq", cfg.pq)->required();
  horn_cmd->add_option("--height", cfg.height);
  horn_cmd->add_option("--samples", cfg.samples)->check(CLI::PositiveNumber);

  auto* central_cmd = sub(&app, "centralizer", "is a commuting germ an iterate of Q_{p/q}");
  central_cmd->add_option("--pq", cfg.pq)->required();
  central_cmd->add_option("--germ", cfg.germ_path)->required();

  auto* alpha_cmd = sub(&app, "alpha-seq", "finite stages of the rational sequence");
  alpha_cmd->add_option("--stages", cfg.stages)->check(CLI::PositiveNumber);

  auto* arnold_cmd = sub(&app, "arnold", "the Arnold family");
  arnold_cmd->require_subcommand(1);
  auto* rho_cmd = sub(arnold_cmd, "rho", "certified rotation number");
  rho_cmd->add_option("--a", cfg.a)->required();
  rho_cmd->add_option("--b", cfg.b)->required();
  auto* tongue_cmd = sub(arnold_cmd, "tongue", "tongue boundary parameters");
  tongue_cmd->add_option("--pq", cfg.pq)->required();
  tongue_cmd->add_option("--b", cfg.b)->required();
  tongue_cmd->add_option("--side", cfg.side)->check(CLI::IsMember({"left", "right"}));
  tongue_cmd->add_option("--b-max", cfg.b_max, "scan b up to this value (CSV)");
  tongue_cmd->add_option("--b-steps", cfg.b_steps, "number of scan points (CSV)");
  auto* aseq_cmd = sub(arnold_cmd, "a-seq", "finite stages of the parameter sequence");
  aseq_cmd->add_option("--b", cfg.b)->required();
  aseq_cmd->add_option("--stages", cfg.stages)->check(CLI::PositiveNumber);
  auto* acentral_cmd = sub(arnold_cmd, "centralizer", "centralizer test for an iterate of f");
  acentral_cmd->add_option("--pq", cfg.pq)->required();
  acentral_cmd->add_option("--b", cfg.b)->required();
  acentral_cmd->add_option("--power", cfg.power);

  auto* series_cmd = sub(&app, "series", "truncated power series");
  series_cmd->require_subcommand(1);
  auto* compose_cmd = sub(series_cmd, "compose", "f∘g");
  compose_cmd->add_option("--f", cfg.f_path)->required();
  compose_cmd->add_option("--g", cfg.g_path)->required();
  auto* iterate_cmd = sub(series_cmd, "iterate", "k-th iterate of a germ or of Q_{p/q}");
  iterate_cmd->add_option("--germ", cfg.germ_path);
  iterate_cmd->add_option("--pq", cfg.pq);
  iterate_cmd->add_option("--order", cfg.order);
  iterate_cmd->add_option("--k", cfg.k)->required();
  auto* kset_cmd = sub(series_cmd, "kset", "r-good iterates of Q_{p/q}");
  kset_cmd->add_option("--pq", cfg.pq)->required();
  kset_cmd->add_option("--r", cfg.r)->required();
  kset_cmd->add_option("--order", cfg.order);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  std::string command;
  for (const CLI::App* level = &app; !level->get_subcommands().empty();) {
    level = level->get_subcommands().front();
    command += (command.empty() ? "" : " ") + level->get_name();
  }

  if (const char* env = std::getenv("GERMLAB_PRECISION")) cfg.precision = env;

  try {
    backend_from_string(cfg.precision);
    std::string payload;
    if (command == "normalize") payload = run_normalize(cfg).dump(2);
    else if (command == "fatou") payload = run_fatou(cfg).dump(2);
    else if (command == "horn") payload = run_horn(cfg).dump(2);
    else if (command == "centralizer") payload = run_centralizer(cfg).dump(2);
    else if (command == "alpha-seq") payload = run_alpha_seq(cfg).dump(2);
    else if (command == "arnold rho") payload = run_rho(cfg).dump(2);
    else if (command == "arnold tongue") payload = run_tongue(cfg);
    else if (command == "arnold a-seq") payload = run_a_seq(cfg).dump(2);
    else if (command == "arnold centralizer") payload = run_arnold_centralizer(cfg).dump(2);
    else if (command == "series compose") payload = run_compose(cfg).dump(2);
    else if (command == "series iterate") payload = run_iterate(cfg).dump(2);
    else if (command == "series kset") payload = run_kset(cfg).dump(2);
    else {
      std::cerr << app.help();
      return kUsage;
    }
    emit(cfg, payload);
    write_manifest(cfg, command, std::vector<std::string>(argv + 1, argv + argc));
  } catch (const Error& e) {
    std::cerr << error_json(e).dump() << '\n';
    return kDomain;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", "invalid_argument"}, {"message", e.what()}}.dump() << '\n';
    return kDomain;
  }
  return 0;
}
