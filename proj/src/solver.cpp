// Copyright 2026 The fcpsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "fcpsep/solver.hpp"

#include "fcpsep/banded.hpp"
#include "fcpsep/rng.hpp"
#include "stacking.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <locale>
#include <random>

namespace fcpsep
{

const char * to_string(AlsInit init)
{
  switch (init) {
    case AlsInit::MixtureSplitRandom:
      return "mixture_split_random";
    case AlsInit::Oracle:
      return "oracle";
    case AlsInit::User:
      return "user";
  }
  return "?";
}

AlsInit parse_als_init(const std::string & name)
{
  if (name == "mixture_split_random" || name == "random") {
    return AlsInit::MixtureSplitRandom;
  }
  if (name == "oracle") {
    return AlsInit::Oracle;
  }
  if (name == "user") {
    return AlsInit::User;
  }
  throw ConfigError("unknown init '" + name + "' (expected mixture_split_random, oracle or user)");
}

void AlsConfig::validate() const
{
  require(max_iters >= 1, "als: max_iters must be >= 1");
  require(tol_rel > 0.0, "als: tol_rel must be positive");
  require(source_ridge >= 0.0, "als: source_ridge must be >= 0");
  fcp.validate();
  if (init != AlsInit::MixtureSplitRandom) {
    require(!init_estimates.empty(), std::string("als: init '") + to_string(init) + "' needs initial estimates");
  }
}

namespace
{

void check_filters(const RelativeFilterBank & bank, const MultiSpectrogram & mixtures)
{
  require<GeometryError>(
    bank.mics == static_cast<int>(mixtures.size()) && bank.speakers >= 1 &&
      bank.filters.size() == static_cast<std::size_t>(bank.mics * bank.speakers),
    "als: filter bank does not match the mixtures");
  const RelativeFilter & first = bank.filters.front();
  for (const auto & g : bank.filters) {
    require<GeometryError>(
      g.past == first.past && g.future == first.future && g.bins() == mixtures.front().cols(),
      "als: filters must share taps and bins");
    require<NumericalError>(g.coeffs.allFinite(), "als: non-finite filter");
  }
}

}  // namespace

Eigen::VectorXd filter_ridge(const MultiSpectrogram & mixtures, double ridge)
{
  require_uniform_geometry(mixtures, "filter_ridge");
  const Eigen::VectorXd energy = mixtures.front().cwiseAbs2().colwise().sum().transpose();
  // Floor keeps silent bins solvable without moving the others.
  const double floor = std::max(1e-12 * energy.mean(), 1e-300);
  return ridge * energy.cwiseMax(floor);
}

RelativeFilterBank filter_step(
  const MultiSpectrogram & estimates, const MultiSpectrogram & mixtures, const FcpConfig & cfg,
  const Eigen::VectorXd & ridge_per_bin)
{
  cfg.validate();
  require_uniform_geometry(estimates, "filter_step (estimates)");
  require_uniform_geometry(mixtures, "filter_step (mixtures)");
  require_same_geometry(estimates.front(), mixtures.front(), "filter_step");
  for (const auto & x : estimates) {
    require<NumericalError>(x.allFinite(), "filter_step: non-finite estimate");
  }
  const int bins = static_cast<int>(mixtures.front().cols());
  const int frames = static_cast<int>(mixtures.front().rows());
  require<GeometryError>(ridge_per_bin.size() == bins, "filter_step: one ridge value per bin");

  const int speakers = static_cast<int>(estimates.size());
  const int taps = cfg.taps();
  const int unknowns = speakers * taps;

  RelativeFilterBank bank;
  bank.mics = static_cast<int>(mixtures.size());
  bank.speakers = speakers;
  for (int p = 0; p < bank.mics; ++p) {
    for (int c = 0; c < speakers; ++c) {
      RelativeFilter g = identity_filter(bins, cfg.past, cfg.future);
      if (p > 0) {
        g.coeffs.setZero();
      }
      bank.filters.push_back(std::move(g));
    }
  }

  Eigen::MatrixXcd design(frames, unknowns);
  for (int f = 0; f < bins; ++f) {
    for (int c = 0; c < speakers; ++c) {
      detail::fill_window(estimates[c], f, cfg.past, taps, design.middleCols(c * taps, taps));
    }
    Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(unknowns, unknowns);
    gram.selfadjointView<Eigen::Lower>().rankUpdate(design.adjoint());
    gram = gram.selfadjointView<Eigen::Lower>();
    if (!(gram.diagonal().real().sum() > 0.0)) {
      continue;  // all estimates silent in this bin: zero filters
    }
    gram.diagonal().array() += ridge_per_bin(f);
    Eigen::LLT<Eigen::MatrixXcd> llt(gram);
    const bool use_llt = llt.info() == Eigen::Success;
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod;
    if (!use_llt) {
      cod.compute(gram);
    }
    for (int p = 1; p < bank.mics; ++p) {
      const Eigen::VectorXcd rhs = design.adjoint() * mixtures[p].col(f);
      const Eigen::VectorXcd coef = use_llt ? Eigen::VectorXcd(llt.solve(rhs)) : Eigen::VectorXcd(cod.solve(rhs));
      for (int c = 0; c < speakers; ++c) {
        bank.at(p, c).coeffs.row(f) = coef.segment(c * taps, taps).conjugate().transpose();
      }
    }
  }
  return bank;
}

MultiSpectrogram source_step(
  const RelativeFilterBank & filters, const MultiSpectrogram & mixtures, double source_ridge,
  double * condition, SourceSolver solver)
{
  require_uniform_geometry(mixtures, "source_step");
  check_filters(filters, mixtures);
  require(source_ridge >= 0.0, "source_step: source_ridge must be >= 0");

  const int speakers = filters.speakers;
  const int frames = static_cast<int>(mixtures.front().rows());
  const int bins = static_cast<int>(mixtures.front().cols());
  const int past = filters.filters.front().past;
  const int taps = filters.filters.front().taps();
  const int width = taps * speakers;  // entries per filtered row
  const Eigen::Index n = static_cast<Eigen::Index>(frames) * speakers;

  MultiSpectrogram out(static_cast<std::size_t>(speakers), Spectrogram::Zero(frames, bins));
  double worst = 1.0;

  // Adds the row r (entries at indices base .. base + r.size() - 1, clipped
  // to [0, n)) with target y to the normal equations through `add`.
  auto accumulate = [&](auto && add, Eigen::VectorXcd & rhs, const Eigen::MatrixXcd & outer,
                        const Eigen::VectorXcd & row_conj, Eigen::Index base, const Complex & y) {
    const Eigen::Index len = row_conj.size();
    const Eigen::Index lo = std::max<Eigen::Index>(0, -base);
    const Eigen::Index hi = std::min<Eigen::Index>(len, n - base);
    for (Eigen::Index j = lo; j < hi; ++j) {
      rhs(base + j) += row_conj(j) * y;
      for (Eigen::Index i = j; i < hi; ++i) {
        add(base + i, base + j, outer(i, j));
      }
    }
  };

  std::vector<Eigen::VectorXcd> row_conj(static_cast<std::size_t>(filters.mics));
  std::vector<Eigen::MatrixXcd> outer(static_cast<std::size_t>(filters.mics));
  for (int f = 0; f < bins; ++f) {
    // Mic 0 rows: sum_c X_c(t). Mic p rows: sum_{k,c} conj(g_pck) X_c(t - past + k),
    // i.e. a contiguous run of `width` unknowns starting at (t - past) * C.
    row_conj[0] = Eigen::VectorXcd::Ones(speakers);
    for (int p = 1; p < filters.mics; ++p) {
      Eigen::VectorXcd r(width);
      for (int k = 0; k < taps; ++k) {
        for (int c = 0; c < speakers; ++c) {
          r(k * speakers + c) = filters.at(p, c).coeffs(f, k);  // conj of the multiplier
        }
      }
      row_conj[p] = r;
    }
    for (int p = 0; p < filters.mics; ++p) {
      outer[p] = row_conj[p] * row_conj[p].conjugate().transpose();
    }

    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n);
    Eigen::VectorXcd x;
    if (solver == SourceSolver::Banded) {
      BandedHermitian<Complex> normal(n, std::min<Eigen::Index>(n - 1, std::max(width, speakers) - 1));
      auto add = [&](Eigen::Index i, Eigen::Index j, const Complex & v) { normal.add_lower(i, j, v); };
      for (int p = 0; p < filters.mics; ++p) {
        const Eigen::Index shift = p == 0 ? 0 : -past;
        for (int t = 0; t < frames; ++t) {
          accumulate(add, rhs, outer[p], row_conj[p], (t + shift) * speakers, mixtures[p](t, f));
        }
      }
      normal.add_diagonal(source_ridge);
      BandedCholesky<Complex> chol(normal);
      require<NumericalError>(
        chol.ok(), "source_step: normal equations not positive definite; use source_ridge > 0");
      worst = std::max(worst, chol.condition_estimate());
      x = chol.solve(rhs);
    } else {
      Eigen::MatrixXcd normal = Eigen::MatrixXcd::Zero(n, n);
      auto add = [&](Eigen::Index i, Eigen::Index j, const Complex & v) { normal(i, j) += v; };
      for (int p = 0; p < filters.mics; ++p) {
        const Eigen::Index shift = p == 0 ? 0 : -past;
        for (int t = 0; t < frames; ++t) {
          accumulate(add, rhs, outer[p], row_conj[p], (t + shift) * speakers, mixtures[p](t, f));
        }
      }
      normal.diagonal().array() += source_ridge;
      Eigen::LLT<Eigen::MatrixXcd, Eigen::Lower> llt(normal);
      require<NumericalError>(
        llt.info() == Eigen::Success, "source_step: normal equations not positive definite; use source_ridge > 0");
      x = llt.solve(rhs);
    }
    require<NumericalError>(x.allFinite(), "source_step: non-finite solution");
    for (int t = 0; t < frames; ++t) {
      for (int c = 0; c < speakers; ++c) {
        out[c](t, f) = x(static_cast<Eigen::Index>(t) * speakers + c);
      }
    }
  }
  if (condition != nullptr) {
    *condition = worst;
  }
  return out;
}

ObjectiveValue als_objective(
  const MultiSpectrogram & estimates, const RelativeFilterBank & filters, const MultiSpectrogram & mixtures,
  const Eigen::VectorXd & ridge_per_bin, double source_ridge)
{
  check_filters(filters, mixtures);
  require<GeometryError>(
    static_cast<int>(estimates.size()) == filters.speakers, "als_objective: speaker count differs from bank");
  ObjectiveValue v;
  Spectrogram sum = mixtures[0];
  for (const auto & x : estimates) {
    sum -= x;
    v.penalty += source_ridge * x.squaredNorm();
  }
  v.data = sum.squaredNorm();
  for (int p = 1; p < filters.mics; ++p) {
    Spectrogram residual = mixtures[p];
    for (int c = 0; c < filters.speakers; ++c) {
      residual -= fcp_image(estimates[c], filters.at(p, c));
      v.penalty += filters.at(p, c).coeffs.rowwise().squaredNorm().dot(ridge_per_bin);
    }
    v.data += residual.squaredNorm();
  }
  return v;
}

namespace
{

MultiSpectrogram initial_estimates(const MultiSpectrogram & mixtures, int speakers, const AlsConfig & cfg)
{
  if (cfg.init != AlsInit::MixtureSplitRandom) {
    require<GeometryError>(
      static_cast<int>(cfg.init_estimates.size()) == speakers, "als: need one initial estimate per speaker");
    for (const auto & x : cfg.init_estimates) {
      require_same_geometry(x, mixtures.front(), "als init");
      require<NumericalError>(x.allFinite(), "als: non-finite initial estimate");
    }
    return cfg.init_estimates;
  }
  Rng rng = SeedSplitter(cfg.seed).stream("als/init");
  std::normal_distribution<double> normal;
  const Spectrogram & y = mixtures.front();
  MultiSpectrogram x;
  const double scale = 0.1 / std::sqrt(2.0);
  for (int c = 0; c < speakers; ++c) {
    Spectrogram z(y.rows(), y.cols());
    for (Eigen::Index f = 0; f < y.cols(); ++f) {
      for (Eigen::Index t = 0; t < y.rows(); ++t) {
        const double re = normal(rng);
        const double im = normal(rng);
        z(t, f) = y(t, f) / static_cast<double>(speakers) * Complex(1.0 + scale * re, scale * im);
      }
    }
    x.push_back(std::move(z));
  }
  return x;
}

}  // namespace

AlsResult solve(const MultiSpectrogram & mixtures, int speakers, const AlsConfig & cfg)
{
  cfg.validate();
  require(speakers >= 1, "als: need at least one speaker");
  require_uniform_geometry(mixtures, "als (mixtures)");
  for (const auto & y : mixtures) {
    require<NumericalError>(y.allFinite(), "als: non-finite mixture");
  }

  AlsResult r;
  AlsTrace & trace = r.trace;
  for (const auto & y : mixtures) {
    trace.mixture_energy += y.squaredNorm();
  }
  require<DegenerateInputError>(trace.mixture_energy > 0.0, "als: all-zero mixture");
  const int mics = static_cast<int>(mixtures.size());
  if (mics <= speakers) {
    trace.warnings.push_back(
      "als: " + std::to_string(mics) + " microphones for " + std::to_string(speakers) +
      " speakers; the problem is not over-determined");
  }

  const Eigen::VectorXd ridge = filter_ridge(mixtures, cfg.fcp.ridge);
  const double slack_abs = 1e-15 * trace.mixture_energy;

  MultiSpectrogram x = initial_estimates(mixtures, speakers, cfg);
  RelativeFilterBank bank = filter_step(x, mixtures, cfg.fcp, ridge);
  ObjectiveValue value = als_objective(x, bank, mixtures, ridge, cfg.source_ridge);
  trace.half_steps.push_back({0, 'f', value});
  trace.objective.push_back(value.total());
  trace.data_term.push_back(value.data);

  auto record = [&](int iter, char step, const ObjectiveValue & next) {
    const double prev = trace.half_steps.back().value.total();
    trace.half_steps.push_back({iter, step, next});
    if (!std::isfinite(next.total()) || next.total() > prev * (1.0 + 1e-9) + slack_abs) {
      throw NumericalError(
        "als diverged: objective rose from " + std::to_string(prev) + " to " + std::to_string(next.total()) +
        " in the " + (step == 's' ? "source" : "filter") + " step of iteration " + std::to_string(iter));
    }
  };

  for (int iter = 1; iter <= cfg.max_iters; ++iter) {
    double cond = 0.0;
    x = source_step(bank, mixtures, cfg.source_ridge, &cond);
    record(iter, 's', als_objective(x, bank, mixtures, ridge, cfg.source_ridge));
    bank = filter_step(x, mixtures, cfg.fcp, ridge);
    value = als_objective(x, bank, mixtures, ridge, cfg.source_ridge);
    record(iter, 'f', value);

    const double prev = trace.objective.back();
    trace.objective.push_back(value.total());
    trace.data_term.push_back(value.data);
    trace.condition.push_back(cond);
    trace.iterations = iter;
    // Relative to the mixture energy: J itself is ~0 at an exact fit.
    if (prev - value.total() < cfg.tol_rel * trace.mixture_energy) {
      trace.converged = true;
      break;
    }
  }

  r.images = fcp_images(x, bank);
  r.estimates = std::move(x);
  r.filters = std::move(bank);
  return r;
}

MultiSpectrogram extract_reference_images(const MultiSpectrogram & estimates, const RelativeFilterBank & filters)
{
  require<GeometryError>(
    static_cast<int>(estimates.size()) == filters.speakers && filters.mics >= 1,
    "extract_reference_images: estimates do not match the filter bank");
  MultiSpectrogram out;
  for (int c = 0; c < filters.speakers; ++c) {
    out.push_back(fcp_image(estimates[c], filters.at(0, c)));
  }
  return out;
}

void write_trace_csv(std::ostream & os, const AlsTrace & trace)
{
  os.imbue(std::locale::classic());
  os << "iter,objective\n" << std::setprecision(12);
  for (std::size_t i = 0; i < trace.objective.size(); ++i) {
    os << i << ',' << trace.objective[i] << '\n';
  }
}

void write_trace_detail_csv(std::ostream & os, const AlsTrace & trace)
{
  os.imbue(std::locale::classic());
  os << "iter,step,objective,data_term\n" << std::setprecision(12);
  for (const auto & h : trace.half_steps) {
    os << h.iter << ',' << (h.step == 's' ? "source" : "filter") << ',' << h.value.total() << ',' << h.value.data
       << '\n';
  }
}

}  // namespace fcpsep
