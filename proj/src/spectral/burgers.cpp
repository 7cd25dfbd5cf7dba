#include "pinndarts/spectral/burgers.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#include "pinndarts/error.hpp"
#include "pinndarts/pde/problem.hpp"

namespace pinndarts {

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

// Lobatto nodes with exact odd symmetry: x_{n-j} = -x_j.
Vector lobatto_nodes(std::size_t n) {
  Vector x(idx(n + 1));
  for (std::size_t j = 0; j <= n; ++j) {
    if (2 * j < n)
      x(idx(j)) = std::cos(kPi * static_cast<double>(j) / static_cast<double>(n));
    else if (2 * j == n)
      x(idx(j)) = 0.0;
    else
      x(idx(j)) = -x(idx(n - j));
  }
  return x;
}

}  // namespace

ChebGrid cheb_diff_matrix(std::size_t n) {
  if (n < 1) throw ConfigError("cheb_diff_matrix: n must be at least 1");
  ChebGrid g;
  g.n = n;
  g.nodes = lobatto_nodes(n);
  const auto m = idx(n + 1);
  Vector c = Vector::Ones(m);
  c(0) = 2.0;
  c(m - 1) = 2.0;
  for (Eigen::Index i = 1; i < m; i += 2) c(i) = -c(i);
  g.d.resize(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      g.d(i, j) = i == j ? 0.0 : (c(i) / c(j)) / (g.nodes(i) - g.nodes(j));
  // Diagonal from the negative row sum: exact annihilation of constants.
  for (Eigen::Index i = 0; i < m; ++i) g.d(i, i) = -g.d.row(i).sum();
  return g;
}

double cheb_interpolate(const Vector& nodes, std::span<const double> values, double x) {
  const auto m = nodes.size();
  double num = 0.0, den = 0.0;
  for (Eigen::Index j = 0; j < m; ++j) {
    const double diff = x - nodes(j);
    if (diff == 0.0) return values[static_cast<std::size_t>(j)];
    double w = j % 2 == 0 ? 1.0 : -1.0;
    if (j == 0 || j == m - 1) w *= 0.5;
    const double t = w / diff;
    num += t * values[static_cast<std::size_t>(j)];
    den += t;
  }
  return num / den;
}

ReferenceField solve_burgers(const BurgersSolverConfig& config) {
  if (config.n < 64) throw ConfigError("solve_burgers: n must be at least 64");
  if (config.output.nx < 2 || config.output.ny < 2) throw ConfigError("solve_burgers: output grid too small");
  if (!(config.map_eps > 0.0) || !(config.t_end > 0.0) || config.dt < 0.0)
    throw ConfigError("solve_burgers: invalid map, end time or step");
  const double nu = PdeProblem::kBurgersViscosity;
  const std::size_t n = config.n;
  const ChebGrid g = cheb_diff_matrix(n);

  // Physical nodes and derivative matrices through the tangent map.
  const double eps = config.map_eps;
  const double a = std::atan(1.0 / eps);
  const auto m = idx(n + 1);
  Vector x(m), inv_jac(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    const double xi = g.nodes(j);
    x(j) = std::abs(xi) == 1.0 ? xi : eps * std::tan(a * xi);
    const double sec = 1.0 / std::cos(a * xi);
    inv_jac(j) = 1.0 / (eps * a * sec * sec);
  }
  const Matrix d1 = inv_jac.asDiagonal() * g.d;
  const Matrix d2 = d1 * d1;

  double h = 2.0;
  for (Eigen::Index j = 0; j + 1 < m; ++j) h = std::min(h, x(j) - x(j + 1));
  const double dt_target = config.dt > 0.0 ? config.dt : config.courant * std::min(h * h / nu, h);

  // Interior block only; boundary values stay zero.
  const Eigen::Index k = m - 2;
  const Matrix d1i = d1.block(1, 1, k, k);
  const Matrix d2i = d2.block(1, 1, k, k);
  auto rhs = [&](const Vector& u) -> Vector {
    return (-u.cwiseProduct(d1i * u) + nu * (d2i * u)).eval();
  };

  Vector u(k);
  for (Eigen::Index j = 0; j < k; ++j) u(j) = -std::sin(kPi * x(j + 1));

  ReferenceField field;
  field.shape = config.output;
  field.n = n;
  field.map_eps = eps;
  field.t_end = config.t_end;
  field.values.assign(config.output.size(), 0.0);

  // Output abscissae in the computational coordinate.
  std::vector<double> xi_out(config.output.nx);
  for (std::size_t i = 0; i < config.output.nx; ++i) {
    const double xo = grid_coordinate(-1.0, 1.0, i, config.output.nx);
    xi_out[i] = std::abs(xo) == 1.0 ? xo : std::atan(xo / eps) / a;
  }
  std::vector<double> full(static_cast<std::size_t>(m), 0.0);
  auto store = [&](std::size_t row) {
    for (Eigen::Index j = 0; j < k; ++j) full[static_cast<std::size_t>(j + 1)] = u(j);
    for (std::size_t i = 0; i < config.output.nx; ++i)
      field.values[row * config.output.nx + i] = cheb_interpolate(g.nodes, full, xi_out[i]);
  };
  store(0);

  double t = 0.0;
  double dt_used = dt_target;
  for (std::size_t row = 1; row < config.output.ny; ++row) {
    const double t_next = grid_coordinate(0.0, config.t_end, row, config.output.ny);
    const auto steps = static_cast<std::size_t>(std::ceil((t_next - t) / dt_target - 1e-9));
    const double dt = (t_next - t) / static_cast<double>(std::max<std::size_t>(steps, 1));
    dt_used = std::min(dt_used, dt);
    for (std::size_t s = 0; s < std::max<std::size_t>(steps, 1); ++s) {
      const Vector k1 = rhs(u);
      const Vector k2 = rhs(u + 0.5 * dt * k1);
      const Vector k3 = rhs(u + 0.5 * dt * k2);
      const Vector k4 = rhs(u + dt * k3);
      u += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      ++field.steps;
    }
    const double norm = u.cwiseAbs().maxCoeff();
    if (!std::isfinite(norm) || norm > 10.0) {
      char msg[160];
      std::snprintf(msg, sizeof msg, "Burgers solver unstable at t=%.4f (max |u| = %g, dt = %g, n = %zu)", t_next,
                    norm, dt, n);
      throw NumericalError(msg);
    }
    t = t_next;
    store(row);
  }
  field.dt = dt_used;
  return field;
}

void write_reference(std::ostream& out, const ReferenceField& field, const ArtifactMeta& meta) {
  write_csv_preamble(out, meta, "burgers-reference", kReferenceFormatVersion);
  char line[256];
  std::snprintf(line, sizeof line, "# n=%zu dt=%.17g steps=%zu map_eps=%.17g t_end=%.17g nx=%zu nt=%zu scheme=%s\n",
                field.n, field.dt, field.steps, field.map_eps, field.t_end, field.shape.nx, field.shape.ny,
                field.scheme.c_str());
  out << line << "i,j,u\n";
  for (std::size_t j = 0; j < field.shape.ny; ++j)
    for (std::size_t i = 0; i < field.shape.nx; ++i) {
      std::snprintf(line, sizeof line, "%zu,%zu,%.17g\n", i, j, field.at(i, j));
      out << line;
    }
}

ReferenceField read_reference(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.find("format=burgers-reference/") == std::string::npos)
    throw ConfigError("reference file: missing header");
  const auto pos = line.find("format=burgers-reference/") + 25;
  if (std::atoi(line.c_str() + pos) != kReferenceFormatVersion)
    throw ConfigError("reference file: unsupported format version");
  ReferenceField f;
  char scheme[64] = {0};
  if (!std::getline(in, line) ||
      std::sscanf(line.c_str(), "# n=%zu dt=%lf steps=%zu map_eps=%lf t_end=%lf nx=%zu nt=%zu scheme=%63s", &f.n,
                  &f.dt, &f.steps, &f.map_eps, &f.t_end, &f.shape.nx, &f.shape.ny, scheme) != 8)
    throw ConfigError("reference file: malformed solver line");
  f.scheme = scheme;
  if (!std::getline(in, line) || line != "i,j,u") throw ConfigError("reference file: missing column header");
  f.values.assign(f.shape.size(), 0.0);
  for (std::size_t r = 0; r < f.shape.size(); ++r) {
    std::size_t i = 0, j = 0;
    char* end = nullptr;
    if (!std::getline(in, line) || std::sscanf(line.c_str(), "%zu,%zu,", &i, &j) != 2 || i >= f.shape.nx ||
        j >= f.shape.ny)
      throw ConfigError("reference file: truncated or malformed data");
    const char* value = line.c_str() + line.rfind(',') + 1;
    f.values[j * f.shape.nx + i] = std::strtod(value, &end);
    if (end == value) throw ConfigError("reference file: malformed value");
  }
  return f;
}

std::filesystem::path default_cache_dir() {
  if (const char* env = std::getenv("PINNDARTS_CACHE_DIR"); env != nullptr && *env != '\0') return env;
  return ".pinndarts-cache";
}

std::filesystem::path reference_cache_path(const std::filesystem::path& dir, const BurgersSolverConfig& config) {
  char name[200];
  std::snprintf(name, sizeof name, "burgers-n%zu-dt%.6g-c%.6g-eps%.6g-t%.6g-%zux%zu.v%d.csv", config.n, config.dt,
                config.courant, config.map_eps, config.t_end, config.output.nx, config.output.ny,
                kReferenceFormatVersion);
  return dir / name;
}

ReferenceField load_reference(const std::filesystem::path& dir, const BurgersSolverConfig& config, bool build) {
  const auto path = reference_cache_path(dir, config);
  if (std::ifstream in(path); in) return read_reference(in);
  if (!build) throw MissingReferenceError("Burgers reference not found: " + path.string());
  ReferenceField f = solve_burgers(config);
  std::filesystem::create_directories(dir);
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    write_reference(out, f, {});
  }
  std::filesystem::rename(tmp, path);
  return f;
}

}  // namespace pinndarts
