#include "dsbeta/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "dsbeta/density.hpp"
#include "dsbeta/io.hpp"
#include "dsbeta/random.hpp"
#include "dsbeta/sampler.hpp"
#include "dsbeta/verify.hpp"

namespace dsbeta::cli {

namespace {

struct RunConfig {
  std::string subcommand;
  std::string family;
  std::string variant = "spectral-m";
  int m = 0, n = 0, r = 0, r_xi = 0;
  std::string convention = "paper";
  std::uint64_t seed = 0;
  long n_samples = 0;
  std::string emit = "matrix";
  std::string grid;
  std::string out;
  std::string format;
  std::string point;
  std::string input;
  std::string theta;
  std::string substitution = "endpoint";
  int points = 64;
  bool independent_arms = false;
  bool matrix = false;
};

// Output rendered in memory and written once the command has succeeded.
struct Output {
  std::string text;
};

Convention parse_convention(const std::string &s) {
  return s == "corrected" ? Convention::corrected : Convention::paper;
}

std::vector<double> parse_list(const std::string &s, const char *what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception &) {
      used = 0;
    }
    require(used > 0 && used == item.size(), ErrorKind::invalid_input,
            std::string("cannot parse ") + what + " entry '" + item + "'");
    out.push_back(v);
  }
  require(!out.empty(), ErrorKind::invalid_input, std::string(what) + " is empty");
  return out;
}

std::vector<double> parse_grid(const std::string &s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  require(parts.size() == 3, ErrorKind::invalid_input, "--grid must look like a:b:steps");
  const auto a = parse_list(parts[0], "--grid");
  const auto b = parse_list(parts[1], "--grid");
  const auto steps = parse_list(parts[2], "--grid");
  require(a.size() == 1 && b.size() == 1 && steps.size() == 1, ErrorKind::invalid_input,
          "--grid must look like a:b:steps");
  const double k = steps[0];
  require(k >= 1 && k == std::floor(k) && k <= 1e7, ErrorKind::invalid_input,
          "--grid steps must be a positive integer");
  require(a[0] <= b[0], ErrorKind::invalid_input, "--grid requires a ≤ b");
  const long count = static_cast<long>(k);
  std::vector<double> out(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i) {
    out[static_cast<std::size_t>(i)] =
        count == 1 ? a[0] : a[0] + (b[0] - a[0]) * static_cast<double>(i) / (count - 1);
  }
  return out;
}

Matrix reshape(const std::vector<double> &flat, Eigen::Index rows, Eigen::Index cols) {
  require(static_cast<Eigen::Index>(flat.size()) == rows * cols, ErrorKind::invalid_dims,
          "--point needs " + std::to_string(rows * cols) + " entries (" + std::to_string(rows) +
              " x " + std::to_string(cols) + ", row-major)");
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = flat[static_cast<std::size_t>(i * cols + j)];
  }
  return m;
}

Scale parse_theta(const RunConfig &cfg) {
  if (cfg.theta.empty()) return std::nullopt;
  const auto d = parse_list(cfg.theta, "--theta");
  require(static_cast<int>(d.size()) == cfg.m, ErrorKind::invalid_dims,
          "--theta needs m diagonal entries");
  for (double v : d) {
    require(std::isfinite(v) && v > 0.0, ErrorKind::invalid_input,
            "--theta entries must be positive");
  }
  return SpectralPSD::diagonal(Eigen::Map<const Vector>(d.data(), cfg.m));
}

DistDims dims_of(const RunConfig &cfg) { return DistDims(cfg.m, cfg.n, cfg.r, cfg.r_xi); }

bool full_r(const RunConfig &cfg) { return cfg.variant == "full-r"; }

std::optional<EigFamily> eig_family(const std::string &name) {
  if (name == "sv-t-eigs" || name == "t") return EigFamily::sv_t;
  if (name == "beta2-eigs" || name == "beta2") return EigFamily::beta2;
  if (name == "beta1-eigs" || name == "beta1") return EigFamily::beta1;
  if (name == "inv-t") return EigFamily::inv_t;
  return std::nullopt;
}

EigDensityFamily eig_family_of(const RunConfig &cfg) {
  const auto f = eig_family(cfg.family);
  require(f.has_value(), ErrorKind::unsupported,
          "family " + cfg.family + " has no eigenvalue law; use sv-t-eigs, beta1-eigs, "
          "beta2-eigs or inv-t");
  return EigDensityFamily(*f, cfg.m, cfg.n, cfg.r);
}

QuadScheme scheme_of(const RunConfig &cfg) {
  QuadScheme s;
  s.points_per_axis = cfg.points;
  s.substitution = cfg.substitution == "none"       ? Substitution::none
                   : cfg.substitution == "unit-box" ? Substitution::unit_box
                                                    : Substitution::endpoint;
  validate(s);
  return s;
}

void emit_json(Output &o, const nlohmann::ordered_json &j) { o.text = j.dump(2) + "\n"; }

// ---- sample ----

struct Drawn {
  Matrix matrix;
  Vector eigs;
};

Drawn from_spectral(const SpectralPSD &s) { return {s.reconstruct(), s.eigs()}; }
Drawn from_rect(Matrix m) {
  Vector sv = singular_values(m);
  return {std::move(m), std::move(sv)};
}
Drawn from_sym(Matrix m) {
  Vector e = symmetric_eigs_desc(m);
  return {std::move(m), std::move(e)};
}

std::function<Drawn(RngStream &)> sampler_for(const RunConfig &cfg, const std::string &family) {
  const DistDims dims = dims_of(cfg);
  const CovFactor xi = CovFactor::leading(cfg.r, dims.r_xi());
  if (family == "matrix-normal") {
    return [m = cfg.m, r = cfg.r, xi](RngStream &rng) {
      return from_rect(sample_matrix_normal(m, r, xi, rng));
    };
  }
  if (family == "pseudo-wishart") {
    return [m = cfg.m, n = cfg.n](RngStream &rng) {
      return from_spectral(sample_pseudo_wishart(m, n, rng));
    };
  }
  if (family == "t" || family == "x") {
    const TParams params(dims, Matrix::Zero(cfg.m, cfg.r), std::nullopt, xi);
    if (family == "t") {
      return [params](RngStream &rng) { return from_rect(sample_t(params, rng)); };
    }
    return [params](RngStream &rng) { return from_rect(sample_x(params, rng)); };
  }
  if (family == "beta2") {
    if (full_r(cfg)) {
      dims.require_full_r();
      return [dims](RngStream &rng) { return from_sym(sample_beta2_full(dims, rng)); };
    }
    return [dims, xi](RngStream &rng) {
      return from_spectral(sample_beta2_spectral(dims, xi, rng));
    };
  }
  if (family == "beta1") {
    if (full_r(cfg)) {
      dims.require_full_r();
      require(cfg.m <= cfg.n, ErrorKind::degenerate,
              "beta type I construction has eigenvalues equal to 1 when m > n (requires m ≤ n)");
      return [dims](RngStream &rng) { return from_sym(sample_beta1_full(dims, rng)); };
    }
    require(cfg.m <= cfg.n, ErrorKind::degenerate,
            "beta type I construction has eigenvalues equal to 1 when m > n (requires m ≤ n)");
    return [dims, xi](RngStream &rng) {
      return from_spectral(sample_beta1_spectral(dims, xi, rng));
    };
  }
  if (family == "inv-t") {
    dims.require_inverted_t();
    require(cfg.m <= cfg.n, ErrorKind::degenerate,
            "inverted t construction has singular values equal to 1 when m > n (requires m = n)");
    return [dims](RngStream &rng) { return from_rect(sample_inverted_t(dims, rng)); };
  }
  fail(ErrorKind::unsupported, "cannot sample family " + family);
}

void cmd_sample(const RunConfig &cfg, Output &o) {
  std::string family = cfg.family;
  bool eigs_only = cfg.emit == "eigs";
  if (family == "sv-t-eigs" || family == "beta1-eigs" || family == "beta2-eigs") {
    family = family == "sv-t-eigs" ? "t" : family.substr(0, 5);
    eigs_only = true;
  }
  const auto draw = sampler_for(cfg, family);
  std::vector<Matrix> mats;
  std::vector<Vector> eigs;
  const auto count = static_cast<std::size_t>(cfg.n_samples);
  std::optional<RngStream> rng;
  for (std::size_t i = 0; i < count; ++i) {
    if (i % kBatchSize == 0) rng.emplace(cfg.seed, i / kBatchSize);
    Drawn d = draw(*rng);
    if (eigs_only) {
      eigs.push_back(std::move(d.eigs));
    } else {
      mats.push_back(std::move(d.matrix));
    }
  }
  std::ostringstream os;
  if (cfg.format == "json") {
    os << (eigs_only ? eigs_to_json(eigs) : matrices_to_json(mats)).dump() << '\n';
  } else if (eigs_only) {
    write_eigs_csv(os, eigs);
  } else {
    write_matrix_csv(os, mats);
  }
  o.text = os.str();
}

// ---- logpdf ----

std::function<double(const Matrix &)> matrix_density(const RunConfig &cfg,
                                                     Eigen::Index &rows, Eigen::Index &cols) {
  const DistDims dims = dims_of(cfg);
  const Convention conv = parse_convention(cfg.convention);
  const Scale theta = parse_theta(cfg);
  const std::string &f = cfg.family;
  if (f == "t" || f == "x") {
    TParams params(dims, Matrix::Zero(cfg.m, cfg.r), theta,
                   CovFactor::leading(cfg.r, dims.r_xi()));
    rows = cfg.m;
    if (f == "t") {
      cols = cfg.r;
      return [params](const Matrix &t) { return logpdf_t_general(params, t); };
    }
    cols = dims.r_xi();
    return [params](const Matrix &x) { return logpdf_x(params, x); };
  }
  if (f == "beta2" || f == "beta1") {
    const bool two = f == "beta2";
    require(two || !theta, ErrorKind::unsupported, "--theta is not used by beta1");
    if (full_r(cfg)) {
      require(!theta, ErrorKind::unsupported, "--theta is not used by the full-r variant");
      dims.require_full_r();
      rows = cols = cfg.r;
      return [dims, conv, two](const Matrix &s) {
        return two ? logpdf_beta2(dims, s, conv) : logpdf_beta1(dims, s, conv);
      };
    }
    rows = cols = cfg.m;
    return [dims, conv, two, theta](const Matrix &s) {
      const SpectralPSD sp = spectral_nonsingular(s);
      return two ? logpdf_beta2(dims, sp, conv, theta) : logpdf_beta1(dims, sp, conv);
    };
  }
  if (f == "inv-t") {
    require(!theta, ErrorKind::unsupported, "--theta is not used by inv-t");
    dims.require_inverted_t();
    rows = cfg.m;
    cols = cfg.r;
    return [dims, conv](const Matrix &r) { return logpdf_inverted_t(dims, r, conv); };
  }
  if (eig_family(f)) {
    fail(ErrorKind::unsupported, "family " + f + " is an eigenvalue law; use eigpdf");
  }
  fail(ErrorKind::unsupported, "no density is implemented for family " + f);
}

void write_values(Output &o, const RunConfig &cfg, const std::vector<double> &values) {
  if (cfg.format == "json") {
    nlohmann::ordered_json j;
    j["family"] = cfg.family;
    j["convention"] = cfg.convention;
    j["logpdf"] = values;
    emit_json(o, j);
    return;
  }
  std::ostringstream os;
  for (double v : values) os << format_double(v) << '\n';
  o.text = os.str();
}

std::ifstream open_input(const std::string &path) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::invalid_input, "cannot read input file " + path);
  return in;
}

void cmd_logpdf(const RunConfig &cfg, Output &o) {
  Eigen::Index rows = 0, cols = 0;
  const auto density = matrix_density(cfg, rows, cols);
  std::vector<Matrix> points;
  if (!cfg.point.empty()) {
    points.push_back(reshape(parse_list(cfg.point, "--point"), rows, cols));
  } else {
    auto in = open_input(cfg.input);
    Table t = read_table(in);
    require(t.kind == TableKind::matrices, ErrorKind::invalid_input,
            "logpdf --input expects a matrix file");
    points = std::move(t.matrices);
  }
  std::vector<double> values;
  values.reserve(points.size());
  for (const Matrix &p : points) {
    require(p.rows() == rows && p.cols() == cols, ErrorKind::invalid_dims,
            "input matrices must be " + std::to_string(rows) + " x " + std::to_string(cols));
    values.push_back(density(p));
  }
  write_values(o, cfg, values);
}

// ---- eigpdf ----

void cmd_eigpdf(const RunConfig &cfg, Output &o) {
  const EigDensityFamily fam = eig_family_of(cfg);
  const Convention conv = parse_convention(cfg.convention);
  if (!cfg.grid.empty()) {
    const auto grid = parse_grid(cfg.grid);
    const auto cdf = quad_cdf(fam, conv, grid, scheme_of(cfg));
    std::vector<double> logpdf;
    if (fam.r == 1) {
      for (double x : grid) {
        const bool inside = x > 0.0 && (fam.range() == EigRange::positive || x < 1.0);
        logpdf.push_back(inside ? log_eig_density(fam, OrderedEigs(std::vector<double>{x}, fam.range()), conv)
                                : -std::numeric_limits<double>::infinity());
      }
    }
    if (cfg.format == "json") {
      nlohmann::ordered_json j;
      j["family"] = std::string(to_string(fam.family));
      j["convention"] = std::string(to_string(conv));
      j["x"] = grid;
      j["cdf_largest"] = cdf;
      if (!logpdf.empty()) j["logpdf"] = logpdf;
      emit_json(o, j);
      return;
    }
    std::ostringstream os;
    os << "x,cdf_largest" << (logpdf.empty() ? "" : ",logpdf") << '\n';
    for (std::size_t i = 0; i < grid.size(); ++i) {
      os << format_double(grid[i]) << ',' << format_double(cdf[i]);
      if (!logpdf.empty()) os << ',' << format_double(logpdf[i]);
      os << '\n';
    }
    o.text = os.str();
    return;
  }
  std::vector<Vector> rows;
  if (!cfg.point.empty()) {
    const auto v = parse_list(cfg.point, "--point");
    rows.emplace_back(Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size())));
  } else {
    auto in = open_input(cfg.input);
    Table t = read_table(in);
    require(t.kind == TableKind::eigs, ErrorKind::invalid_input,
            "eigpdf --input expects an eigenvalue file");
    rows = std::move(t.eigs);
  }
  std::vector<double> values;
  for (const Vector &v : rows) values.push_back(log_eig_density(fam, OrderedEigs(v, fam.range()), conv));
  write_values(o, cfg, values);
}

// ---- reports ----

void emit_reports(Output &o, const RunConfig &cfg, const std::vector<nlohmann::ordered_json> &reps,
                  bool as_array) {
  if (cfg.format == "csv") {
    std::ostringstream os;
    write_reports_csv(os, reps);
    o.text = os.str();
    return;
  }
  emit_json(o, as_array ? nlohmann::ordered_json(reps) : reps.front());
}

void cmd_audit(const RunConfig &cfg, Output &o) {
  const QuadScheme scheme = scheme_of(cfg);
  std::vector<nlohmann::ordered_json> reps;
  if (cfg.matrix) {
    for (const auto &fam : audit_matrix()) {
      for (Convention conv : {Convention::paper, Convention::corrected}) {
        reps.push_back(to_json(quad_normalize(fam, conv, scheme)));
      }
    }
    emit_reports(o, cfg, reps, true);
    return;
  }
  reps.push_back(to_json(quad_normalize(eig_family_of(cfg), parse_convention(cfg.convention), scheme)));
  emit_reports(o, cfg, reps, false);
}

void cmd_mc_compare(const RunConfig &cfg, Output &o) {
  const McReport rep = mc_compare(eig_family_of(cfg), parse_convention(cfg.convention),
                                  static_cast<std::size_t>(cfg.n_samples), cfg.seed,
                                  scheme_of(cfg));
  emit_reports(o, cfg, {to_json(rep)}, false);
}

void cmd_invariance(const RunConfig &cfg, Output &o) {
  const DistDims dims(cfg.m, cfg.n, cfg.r);
  Scale theta = parse_theta(cfg);
  if (!theta) {
    Vector d = Vector::Ones(cfg.m);
    d(0) = 4.0;
    theta = SpectralPSD::diagonal(d);
  }
  const McReport rep =
      invariance_check(dims, *theta, static_cast<std::size_t>(cfg.n_samples), cfg.seed,
                       cfg.independent_arms ? Arms::independent : Arms::paired);
  emit_reports(o, cfg, {to_json(rep)}, false);
}

// ---- parsing ----

void add_dims(CLI::App *sub, RunConfig &cfg, bool with_xi) {
  sub->add_option("--m", cfg.m, "rows")->required()->check(CLI::PositiveNumber);
  sub->add_option("--n", cfg.n, "degrees of freedom")->required()->check(CLI::PositiveNumber);
  sub->add_option("--r", cfg.r, "columns")->required()->check(CLI::PositiveNumber);
  if (with_xi) sub->add_option("--r-xi", cfg.r_xi, "rank of Xi (default r)")->check(CLI::PositiveNumber);
}

void add_output(CLI::App *sub, RunConfig &cfg) {
  sub->add_option("--out", cfg.out, "output path (default stdout)");
  sub->add_option("--format", cfg.format)->check(CLI::IsMember({"csv", "json"}));
}

void add_convention(CLI::App *sub, RunConfig &cfg) {
  sub->add_option("--convention", cfg.convention)->check(CLI::IsMember({"paper", "corrected"}));
}

void add_quadrature(CLI::App *sub, RunConfig &cfg) {
  sub->add_option("--points", cfg.points, "Gauss-Legendre points per axis")
      ->check(CLI::IsMember({32, 64, 128}));
  sub->add_option("--substitution", cfg.substitution)
      ->check(CLI::IsMember({"none", "unit-box", "endpoint"}));
}

const std::vector<std::string> kMatrixFamilies = {
    "t", "x", "beta1", "beta2", "inv-t", "pseudo-wishart", "matrix-normal",
    "sv-t-eigs", "beta1-eigs", "beta2-eigs"};

int dispatch(const RunConfig &cfg, Output &o) {
  if (cfg.subcommand == "sample") cmd_sample(cfg, o);
  else if (cfg.subcommand == "logpdf") cmd_logpdf(cfg, o);
  else if (cfg.subcommand == "eigpdf") cmd_eigpdf(cfg, o);
  else if (cfg.subcommand == "audit") cmd_audit(cfg, o);
  else if (cfg.subcommand == "mc-compare") cmd_mc_compare(cfg, o);
  else if (cfg.subcommand == "invariance") cmd_invariance(cfg, o);
  return kExitOk;
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  RunConfig cfg;
  CLI::App app{"Doubly singular matrix beta and matricvariate t toolkit", "dsbeta"};
  app.require_subcommand(1, 1);

  auto *sample = app.add_subcommand("sample", "draw from a construction");
  sample->add_option("--family", cfg.family)->required()->check(CLI::IsMember(kMatrixFamilies));
  sample->add_option("--variant", cfg.variant)->check(CLI::IsMember({"spectral-m", "full-r"}));
  add_dims(sample, cfg, true);
  sample->add_option("--seed", cfg.seed);
  sample->add_option("--count,--samples", cfg.n_samples)->required()->check(CLI::PositiveNumber);
  sample->add_option("--emit", cfg.emit)->check(CLI::IsMember({"matrix", "eigs"}));
  add_output(sample, cfg);

  auto *logpdf = app.add_subcommand("logpdf", "evaluate a matrix log density");
  logpdf->add_option("--family", cfg.family)->required()->check(CLI::IsMember(kMatrixFamilies));
  logpdf->add_option("--variant", cfg.variant)->check(CLI::IsMember({"spectral-m", "full-r"}));
  add_dims(logpdf, cfg, true);
  add_convention(logpdf, cfg);
  auto *lp_point = logpdf->add_option("--point", cfg.point, "row-major entries, comma separated");
  auto *lp_input = logpdf->add_option("--input", cfg.input, "matrix file written by sample");
  lp_point->excludes(lp_input);
  logpdf->add_option("--theta", cfg.theta, "diagonal of Theta, comma separated");
  add_output(logpdf, cfg);

  auto *eigpdf = app.add_subcommand("eigpdf", "evaluate a joint eigenvalue log density");
  eigpdf->add_option("--family", cfg.family)
      ->required()
      ->check(CLI::IsMember({"sv-t-eigs", "beta1-eigs", "beta2-eigs", "inv-t"}));
  add_dims(eigpdf, cfg, false);
  add_convention(eigpdf, cfg);
  auto *ep_point = eigpdf->add_option("--point", cfg.point, "descending values, comma separated");
  auto *ep_input = eigpdf->add_option("--input", cfg.input, "eigenvalue file written by sample");
  auto *ep_grid = eigpdf->add_option("--grid", cfg.grid, "a:b:steps, largest-value CDF");
  ep_point->excludes(ep_input)->excludes(ep_grid);
  ep_input->excludes(ep_grid);
  add_quadrature(eigpdf, cfg);
  add_output(eigpdf, cfg);

  auto *audit = app.add_subcommand("audit", "integrate an eigenvalue law numerically");
  auto *audit_family = audit->add_option("--family", cfg.family)
                           ->check(CLI::IsMember({"sv-t-eigs", "beta1-eigs", "beta2-eigs", "inv-t"}));
  audit->add_option("--m", cfg.m)->check(CLI::PositiveNumber);
  audit->add_option("--n", cfg.n)->check(CLI::PositiveNumber);
  audit->add_option("--r", cfg.r)->check(CLI::PositiveNumber);
  add_convention(audit, cfg);
  add_quadrature(audit, cfg);
  auto *audit_matrix_flag = audit->add_flag("--matrix", cfg.matrix, "run the shipped audit matrix");
  audit_matrix_flag->excludes(audit_family);
  add_output(audit, cfg);

  auto *mc = app.add_subcommand("mc-compare", "KS distance between construction and density");
  mc->add_option("--family", cfg.family)
      ->required()
      ->check(CLI::IsMember({"sv-t-eigs", "beta1-eigs", "beta2-eigs", "inv-t", "beta1", "beta2"}));
  add_dims(mc, cfg, false);
  add_convention(mc, cfg);
  mc->add_option("--seed", cfg.seed);
  mc->add_option("--samples,--count", cfg.n_samples)->required()->check(CLI::PositiveNumber);
  add_quadrature(mc, cfg);
  add_output(mc, cfg);

  auto *inv = app.add_subcommand("invariance", "two-sample KS under a change of Theta");
  add_dims(inv, cfg, false);
  inv->add_option("--theta", cfg.theta, "diagonal of Theta (default 4,1,...,1)");
  inv->add_option("--seed", cfg.seed);
  inv->add_option("--samples,--count", cfg.n_samples)->required()->check(CLI::PositiveNumber);
  inv->add_flag("--independent-arms", cfg.independent_arms, "draw the two arms independently");
  add_output(inv, cfg);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError &e) {
    err << "error: " << one_line(e.what()) << '\n';
    return kExitUsage;
  }

  cfg.subcommand = app.get_subcommands().front()->get_name();
  if (cfg.format.empty()) {
    const bool report = cfg.subcommand == "audit" || cfg.subcommand == "mc-compare" ||
                        cfg.subcommand == "invariance";
    cfg.format = report ? "json" : "csv";
  }

  Output o;
  try {
    if (cfg.subcommand == "audit" && !cfg.matrix) {
      require(!cfg.family.empty() && cfg.m > 0 && cfg.n > 0 && cfg.r > 0,
              ErrorKind::invalid_input, "audit needs --family, --m, --n and --r (or --matrix)");
    }
    if (cfg.subcommand == "logpdf" || (cfg.subcommand == "eigpdf" && cfg.grid.empty())) {
      require(!cfg.point.empty() || !cfg.input.empty(), ErrorKind::invalid_input,
              cfg.subcommand + " needs --point or --input");
    }
    dispatch(cfg, o);
  } catch (const Error &e) {
    err << "error: " << one_line(e.what()) << '\n';
    return e.is_numerical() ? kExitNumerical : kExitUsage;
  } catch (const std::exception &e) {
    err << "error: " << one_line(e.what()) << '\n';
    return kExitUsage;
  }

  if (cfg.out.empty()) {
    out << o.text;
    out.flush();
    return kExitOk;
  }
  std::ofstream file(cfg.out, std::ios::binary | std::ios::trunc);
  if (!file) {
    err << "error: cannot write output path " << cfg.out << '\n';
    return kExitUsage;
  }
  file << o.text;
  file.close();
  if (!file) {
    err << "error: cannot write output path " << cfg.out << '\n';
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace dsbeta::cli
