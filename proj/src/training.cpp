#include "gftse/training.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>

#include <json.hpp>

#include "gftse/errors.hpp"
#include "gftse/sisdr.hpp"

namespace gftse {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Solves G Z = rhs with G symmetric positive definite.  Throws NumericError
// on a non-positive pivot (singular or indefinite system).
Matrix cholesky_solve(const Matrix& g, const Matrix& rhs) {
  const std::size_t n = g.rows();
  Matrix l(n, n);
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(g(i, i)));
  const double tol = static_cast<double>(n) * std::numeric_limits<double>::epsilon() * max_diag;

  for (std::size_t j = 0; j < n; ++j) {
    double d = g(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (d <= tol)
      throw NumericError(
          "normal equations are singular; supply ridge > 0 or more training frames");
    l(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      double acc = g(i, j);
      for (std::size_t k = 0; k < j; ++k) acc -= l(i, k) * l(j, k);
      l(i, j) = acc / l(j, j);
    }
  }

  Matrix z = rhs;
  const std::size_t m = rhs.cols();
  for (std::size_t col = 0; col < m; ++col) {
    for (std::size_t i = 0; i < n; ++i) {
      double acc = z(i, col);
      for (std::size_t k = 0; k < i; ++k) acc -= l(i, k) * z(k, col);
      z(i, col) = acc / l(i, i);
    }
    for (std::size_t ii = n; ii-- > 0;) {
      double acc = z(ii, col);
      for (std::size_t k = ii + 1; k < n; ++k) acc -= l(k, ii) * z(k, col);
      z(ii, col) = acc / l(ii, ii);
    }
  }
  return z;
}

constexpr int kMaxHalvings = 20;

struct AscentCallbacks {
  std::function<double(const std::vector<double>&)> objective;
  std::function<std::vector<double>(const std::vector<double>&)> gradient;
  std::function<void(const std::vector<double>&)> on_accept;  // optional
};

// Backtracking gradient ascent with accept-if-improved steps; the returned
// trace is non-decreasing by construction.
std::pair<std::vector<double>, TrainReport> gradient_ascent(std::vector<double> x,
                                                            const TrainConfig& config,
                                                            const AscentCallbacks& cb) {
  const auto start = Clock::now();
  TrainReport report;
  report.trace_db.push_back(cb.objective(x));
  if (cb.on_accept) cb.on_accept(x);

  std::vector<double> trial(x.size());
  for (std::size_t iter = 1; iter < config.max_iters; ++iter) {
    const std::vector<double> grad = cb.gradient(x);
    double step = config.learning_rate;
    bool accepted = false;
    const double best = report.trace_db.back();
    for (int h = 0; h <= kMaxHalvings; ++h, step *= 0.5) {
      for (std::size_t i = 0; i < x.size(); ++i) trial[i] = x[i] + step * grad[i];
      const double value = cb.objective(trial);
      // steps must clear the tolerance, so a converged run stops here
      if (value > best + config.tolerance) {
        x = trial;
        report.trace_db.push_back(value);
        if (cb.on_accept) cb.on_accept(x);
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }

  report.final_db = report.trace_db.back();
  report.iterations = report.trace_db.size();
  report.wall_seconds = seconds_since(start);
  return {std::move(x), std::move(report)};
}

double mean_reconstruction_sisdr(const Matrix& recon, const Matrix& target) {
  double acc = 0.0;
  for (std::size_t f = 0; f < recon.rows(); ++f) {
    acc += si_sdr(std::span(recon.row(f), recon.cols()),
                  std::span(target.row(f), target.cols()));
  }
  return acc / static_cast<double>(recon.rows());
}

void assert_row_stochastic(const Matrix& a, const GraphTopology& base) {
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) sum += a(i, j);
    if (std::abs(sum - 1.0) > 1e-12)
      throw NumericError("adjacency row sum drifted from 1");
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (a(i, j) != 0.0 && base.shift_operator(i, j) == 0.0)
        throw NumericError("adjacency has weight outside the support");
    }
  }
}

}  // namespace

void validate(const TrainConfig& config) {
  if (!(config.learning_rate > 0.0))
    throw InvalidArgument("train config: learning_rate must be positive");
  if (config.max_iters < 1) throw InvalidArgument("train config: max_iters must be >= 1");
  if (!(config.fd_epsilon > 0.0))
    throw InvalidArgument("train config: fd_epsilon must be positive");
  if (config.ridge < 0.0) throw InvalidArgument("train config: ridge must be >= 0");
}

std::string TrainReport::to_json(bool include_timing) const {
  nlohmann::json j;
  j["trace_db"] = trace_db;
  j["final_db"] = final_db;
  j["iterations"] = iterations;
  if (include_timing) j["wall_seconds"] = wall_seconds;
  return j.dump();
}

std::string TrainReport::trace_to_csv() const {
  std::string out = "iteration,objective_db\n";
  char buf[48];
  for (std::size_t i = 0; i < trace_db.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%zu,%.12g\n", i, trace_db[i]);
    out += buf;
  }
  return out;
}

std::pair<SynthesisOperator, TrainReport> train_inverse(const FrameSequence& frames,
                                                        const GraphBasis& basis,
                                                        const TrainConfig& config,
                                                        InverseTrainMethod method) {
  validate(config);
  if (frames.num_frames() == 0) throw InvalidArgument("train_inverse: empty training set");
  if (frames.pad_to != basis.size())
    throw DimensionMismatch("train_inverse: pad_to != basis size");

  const std::size_t n = basis.size();
  const Matrix& x = frames.frames;             // targets
  const Matrix y = matmul(x, basis.psi);       // spectra, row f = (psi^T x_f)^T

  SynthesisOperator op;
  op.basis_id = basis.basis_id;

  if (method == InverseTrainMethod::kLeastSquares) {
    const auto start = Clock::now();
    // B (Y^T Y + ridge I) = X^T Y + ridge psi
    Matrix gram = matmul(transpose(y), y);
    for (std::size_t i = 0; i < n; ++i) gram(i, i) += config.ridge;
    Matrix c = matmul(transpose(x), y);
    if (config.ridge > 0.0) {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) c(i, j) += config.ridge * basis.psi(i, j);
    }
    op.b = transpose(cholesky_solve(gram, transpose(c)));

    TrainReport report;
    report.trace_db.push_back(mean_reconstruction_sisdr(matmul_bt(y, op.b), x));
    report.final_db = report.trace_db.back();
    report.iterations = 1;
    report.wall_seconds = seconds_since(start);
    return {std::move(op), std::move(report)};
  }

  // Gradient ascent on mean per-frame reconstruction SI-SDR, from B = psi.
  std::vector<double> b0(basis.psi.data(), basis.psi.data() + n * n);
  const auto unpack = [n](const std::vector<double>& flat) {
    Matrix b(n, n);
    std::copy(flat.begin(), flat.end(), b.data());
    return b;
  };

  AscentCallbacks cb;
  cb.objective = [&](const std::vector<double>& flat) {
    return mean_reconstruction_sisdr(matmul_bt(y, unpack(flat)), x);
  };
  cb.gradient = [&](const std::vector<double>& flat) {
    const Matrix b = unpack(flat);
    const Matrix recon = matmul_bt(y, b);
    std::vector<double> grad(n * n, 0.0);
    for (std::size_t f = 0; f < y.rows(); ++f) {
      const auto g = si_sdr_gradient(std::span(recon.row(f), n), std::span(x.row(f), n));
      const double* yrow = y.row(f);
      for (std::size_t i = 0; i < n; ++i) {
        const double gi = g[i];
        if (gi == 0.0) continue;
        double* grow = grad.data() + i * n;
        for (std::size_t j = 0; j < n; ++j) grow[j] += gi * yrow[j];
      }
    }
    const double inv_f = 1.0 / static_cast<double>(y.rows());
    for (double& v : grad) v *= inv_f;
    return grad;
  };

  auto [flat, report] = gradient_ascent(std::move(b0), config, cb);
  op.b = unpack(flat);
  return {std::move(op), std::move(report)};
}

double topology_objective(const std::vector<Mixture>& pairs, const Matrix& adjacency,
                          const TopologyPipeline& pipeline) {
  if (pairs.empty()) throw InvalidArgument("topology_objective: empty dataset");
  const GraphBasis basis = svd(adjacency);

  EnhanceOptions options;
  options.transform = TransformKind::kGftSvd;
  options.frame_len = pipeline.frame_len;
  options.hop = pipeline.hop;
  options.pad_to = adjacency.rows();
  options.window = pipeline.window;
  options.mask_lo = pipeline.mask_lo;
  options.mask_hi = pipeline.mask_hi;
  options.basis = &basis;

  double acc = 0.0;
  for (const Mixture& pair : pairs) {
    acc += enhance(pair.noisy, pair.clean, options).second.si_sdr_enhanced;
  }
  return acc / static_cast<double>(pairs.size());
}

std::pair<LearnableTopology, TrainReport> train_topology(
    const std::vector<Mixture>& pairs, const GraphTopology& base,
    const TrainConfig& config, const TopologyPipeline& pipeline,
    const std::function<void(const LearnableTopology&)>& on_accept) {
  validate(config);
  if (pairs.empty()) throw InvalidArgument("train_topology: empty dataset");
  if (base.n_vertices > kMaxFdVertices)
    throw InvalidArgument("train_topology: N too large for finite differences (max 64)");

  LearnableTopology topo(base, TopologyInit::kZeros);
  const std::size_t dim = topo.theta().size();

  const auto objective = [&](const std::vector<double>& theta) {
    LearnableTopology probe(base, TopologyInit::kZeros);
    probe.set_theta(theta);
    return topology_objective(pairs, probe.adjacency(), pipeline);
  };

  AscentCallbacks cb;
  cb.objective = objective;
  cb.gradient = [&](const std::vector<double>& theta) {
    std::vector<double> grad(dim);
    std::vector<double> probe = theta;
    for (std::size_t i = 0; i < dim; ++i) {
      probe[i] = theta[i] + config.fd_epsilon;
      const double up = objective(probe);
      probe[i] = theta[i] - config.fd_epsilon;
      const double down = objective(probe);
      probe[i] = theta[i];
      grad[i] = (up - down) / (2.0 * config.fd_epsilon);
    }
    return grad;
  };
  cb.on_accept = [&](const std::vector<double>& theta) {
    topo.set_theta(theta);
    assert_row_stochastic(topo.adjacency(), base);
    if (on_accept) on_accept(topo);
  };

  auto [theta, report] = gradient_ascent(topo.theta(), config, cb);
  topo.set_theta(std::move(theta));
  return {std::move(topo), std::move(report)};
}

}  // namespace gftse
