#include "guesswork/sdp/conic.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "guesswork/error.hpp"
#include "guesswork/linalg/hermitian.hpp"
#include "guesswork/simd/kernels.hpp"

namespace guesswork::sdp {

using linalg::cplx;
using linalg::CMatrix;

std::size_t ConicProblem::add_block(std::size_t dim, BlockKind kind, HermitianMatrix cost) {
  require(cost.dim() == dim, "add_block: objective dimension differs from the block dimension");
  blocks.push_back({dim, kind});
  objective.push_back(std::move(cost));
  return blocks.size() - 1;
}

void ConicProblem::validate() const {
  require(!blocks.empty(), "conic problem: no blocks");
  require(objective.size() == blocks.size(), "conic problem: need one objective matrix per block");
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    require(blocks[b].dim >= 1, "conic problem: empty block");
    require(objective[b].dim() == blocks[b].dim, "conic problem: objective dimension mismatch in block " + std::to_string(b));
  }
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    const auto& c = constraints[i];
    require(std::isfinite(c.rhs), "conic problem: non-finite rhs in constraint " + std::to_string(i));
    for (const auto& t : c.terms) {
      require(t.block < blocks.size(), "conic problem: constraint " + std::to_string(i) + " refers to a missing block");
      require(t.coeff.dim() == blocks[t.block].dim,
              "conic problem: coefficient dimension mismatch in constraint " + std::to_string(i));
    }
  }
}

std::size_t ConicProblem::variable_count() const {
  std::size_t n = 0;
  for (const auto& b : blocks) n += b.dim * b.dim;
  return n;
}

std::string to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "optimal";
    case Status::MaxIterations: return "max-iterations";
    case Status::InfeasibleSuspected: return "infeasible-suspected";
  }
  return "unknown";
}

namespace {

struct Entry {
  std::size_t index;
  cplx coeff;
};

// The constraint map A as sparse rows over the stacked block entries.
class ConstraintMap {
 public:
  ConstraintMap(const ConicProblem& p, const std::vector<std::size_t>& offsets, std::size_t n)
      : n_(n), rows_(p.constraints.size()) {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      for (const auto& t : p.constraints[i].terms) {
        const auto e = t.coeff.entries();
        for (std::size_t k = 0; k < e.size(); ++k)
          if (e[k] != cplx(0.0)) rows_[i].push_back({offsets[t.block] + k, e[k]});
      }
      // Repeated terms on the same block are summed.
      std::sort(rows_[i].begin(), rows_[i].end(), [](const Entry& a, const Entry& b) { return a.index < b.index; });
      std::vector<Entry> merged;
      for (const auto& en : rows_[i]) {
        if (!merged.empty() && merged.back().index == en.index)
          merged.back().coeff += en.coeff;
        else
          merged.push_back(en);
      }
      rows_[i] = std::move(merged);
    }
  }

  std::size_t rows() const { return rows_.size(); }

  // out = A x
  void apply(std::span<const cplx> x, std::span<double> out) const {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      double s = 0.0;
      for (const auto& e : rows_[i]) s += e.coeff.real() * x[e.index].real() + e.coeff.imag() * x[e.index].imag();
      out[i] = s;
    }
  }

  // out += A^T y
  void apply_adjoint(std::span<const double> y, std::span<cplx> out) const {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (y[i] == 0.0) continue;
      for (const auto& e : rows_[i]) out[e.index] += y[i] * e.coeff;
    }
  }

  double row_norm_sq(std::size_t i) const {
    double s = 0.0;
    for (const auto& e : rows_[i]) s += std::norm(e.coeff);
    return s;
  }

  // Dense G = A A^T, row-major m x m.
  std::vector<double> gram() const {
    const std::size_t m = rows_.size();
    std::vector<double> g(m * m, 0.0);
    // Rows sharing an entry index are the only nonzero pairs.
    std::vector<std::vector<std::size_t>> touching(n_);
    for (std::size_t i = 0; i < m; ++i)
      for (const auto& e : rows_[i]) touching[e.index].push_back(i);
    std::vector<cplx> scratch(n_);
    std::vector<std::size_t> stamp(m, m);
    for (std::size_t j = 0; j < m; ++j) {
      for (const auto& e : rows_[j]) scratch[e.index] = e.coeff;
      for (const auto& e : rows_[j]) {
        for (std::size_t i : touching[e.index]) {
          if (i > j || stamp[i] == j) continue;
          stamp[i] = j;
          double s = 0.0;
          for (const auto& f : rows_[i]) {
            const cplx v = scratch[f.index];
            s += f.coeff.real() * v.real() + f.coeff.imag() * v.imag();
          }
          g[i * m + j] = s;
          g[j * m + i] = s;
        }
      }
      for (const auto& e : rows_[j]) scratch[e.index] = cplx(0.0);
    }
    return g;
  }

 private:
  std::size_t n_;
  std::vector<std::vector<Entry>> rows_;
};

// Solves (A A^T) w = r, by a dense Cholesky factor when small enough,
// otherwise by Jacobi-preconditioned CG warm-started from the previous w.
class GramSolver {
 public:
  GramSolver(const ConstraintMap& a, std::size_t dense_limit) : a_(a), m_(a.rows()) {
    diag_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      diag_[i] = a.row_norm_sq(i);
      require(diag_[i] > 0.0, "conic problem: constraint " + std::to_string(i) + " has no nonzero coefficient");
    }
    if (m_ <= dense_limit) dense_ = factor();
  }

  void solve(std::span<const double> r, std::span<double> w, std::size_t n) {
    if (dense_) {
      std::copy(r.begin(), r.end(), w.begin());
      for (std::size_t i = 0; i < m_; ++i) {
        double s = w[i];
        for (std::size_t k = 0; k < i; ++k) s -= l_[i * m_ + k] * w[k];
        w[i] = s / l_[i * m_ + i];
      }
      for (std::size_t i = m_; i-- > 0;) {
        double s = w[i];
        for (std::size_t k = i + 1; k < m_; ++k) s -= l_[k * m_ + i] * w[k];
        w[i] = s / l_[i * m_ + i];
      }
      return;
    }
    cg(r, w, n);
  }

  bool dense() const { return dense_; }

 private:
  bool factor() {
    l_ = a_.gram();
    double max_diag = 0.0;
    for (std::size_t i = 0; i < m_; ++i) max_diag = std::max(max_diag, l_[i * m_ + i]);
    for (std::size_t j = 0; j < m_; ++j) {
      double d = l_[j * m_ + j];
      for (std::size_t k = 0; k < j; ++k) d -= l_[j * m_ + k] * l_[j * m_ + k];
      if (d <= 1e-13 * max_diag) {
        l_.clear();
        return false;  // dependent constraints: CG still converges on consistent systems
      }
      d = std::sqrt(d);
      l_[j * m_ + j] = d;
      for (std::size_t i = j + 1; i < m_; ++i) {
        double s = l_[i * m_ + j];
        for (std::size_t k = 0; k < j; ++k) s -= l_[i * m_ + k] * l_[j * m_ + k];
        l_[i * m_ + j] = s / d;
      }
    }
    return true;
  }

  void gram_apply(std::span<const double> v, std::span<double> out, std::size_t n) {
    scratch_.assign(n, cplx(0.0));
    a_.apply_adjoint(v, scratch_);
    a_.apply(scratch_, out);
  }

  void cg(std::span<const double> r, std::span<double> w, std::size_t n) {
    std::vector<double> res(m_), z(m_), p(m_), q(m_);
    gram_apply(w, q, n);
    for (std::size_t i = 0; i < m_; ++i) res[i] = r[i] - q[i];
    const double rnorm = std::sqrt(simd::norm_sq(r));
    if (rnorm == 0.0) {
      std::fill(w.begin(), w.end(), 0.0);
      return;
    }
    for (std::size_t i = 0; i < m_; ++i) p[i] = z[i] = res[i] / diag_[i];
    double rz = simd::dot(res, z);
    for (int it = 0; it < 2000; ++it) {
      if (std::sqrt(simd::norm_sq(res)) <= 1e-13 * rnorm) return;
      gram_apply(p, q, n);
      const double pq = simd::dot(p, q);
      if (pq <= 0.0) return;
      const double alpha = rz / pq;
      simd::axpy(alpha, p, w);
      simd::axpy(-alpha, q, res);
      for (std::size_t i = 0; i < m_; ++i) z[i] = res[i] / diag_[i];
      const double rz_new = simd::dot(res, z);
      simd::axpby(1.0, z, rz_new / rz, p);
      rz = rz_new;
    }
  }

  const ConstraintMap& a_;
  std::size_t m_;
  std::vector<double> diag_;
  std::vector<double> l_;
  bool dense_ = false;
  std::vector<cplx> scratch_;
};

double real_inner(std::span<const cplx> a, std::span<const cplx> b) {
  return simd::dot(simd::as_reals(a), simd::as_reals(b));
}

double norm(std::span<const cplx> a) { return std::sqrt(simd::norm_sq(simd::as_reals(a))); }

double norm(std::span<const double> a) { return std::sqrt(simd::norm_sq(a)); }

void load_blocks(const std::vector<HermitianMatrix>& src, const std::vector<std::size_t>& offsets, std::span<cplx> dst) {
  for (std::size_t b = 0; b < src.size(); ++b) {
    const auto e = src[b].entries();
    std::copy(e.begin(), e.end(), dst.begin() + static_cast<std::ptrdiff_t>(offsets[b]));
  }
}

HermitianMatrix block_view(const std::vector<cplx>& v, std::size_t offset, std::size_t dim) {
  const auto first = v.begin() + static_cast<std::ptrdiff_t>(offset);
  return HermitianMatrix(CMatrix(dim, std::vector<cplx>(first, first + static_cast<std::ptrdiff_t>(dim * dim))));
}

// Type-II Anderson acceleration of a fixed-point iteration s <- T(s).
class Anderson {
 public:
  Anderson(std::size_t len, std::size_t memory) : len_(len), mem_(memory) {}

  void reset() {
    count_ = 0;
    head_ = 0;
    have_prev_ = false;
  }

  // g = T(s). Writes the extrapolated next state to `out`.
  void step(std::span<const double> s, std::span<const double> g, std::span<double> out) {
    f_.resize(len_);
    simd::sub(g, s, f_);
    if (have_prev_) {
      if (df_.size() < mem_) {
        df_.emplace_back(len_);
        dg_.emplace_back(len_);
      }
      auto& a = df_[head_];
      auto& b = dg_[head_];
      simd::sub(f_, prev_f_, a);
      simd::sub(g, prev_g_, b);
      head_ = (head_ + 1) % mem_;
      count_ = std::min(count_ + 1, mem_);
    }
    prev_f_.assign(f_.begin(), f_.end());
    prev_g_.assign(g.begin(), g.end());
    have_prev_ = true;
    std::copy(g.begin(), g.end(), out.begin());
    if (count_ == 0) return;

    const std::size_t k = count_;
    std::vector<double> m(k * k), rhs(k);
    double tr = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      rhs[i] = simd::dot(df_[i], f_);
      for (std::size_t j = 0; j <= i; ++j) m[i * k + j] = m[j * k + i] = simd::dot(df_[i], df_[j]);
      tr += m[i * k + i];
    }
    for (std::size_t i = 0; i < k; ++i) m[i * k + i] += 1e-10 * tr + 1e-300;
    // Cholesky solve; a breakdown leaves the plain iterate.
    for (std::size_t j = 0; j < k; ++j) {
      double d = m[j * k + j];
      for (std::size_t q = 0; q < j; ++q) d -= m[j * k + q] * m[j * k + q];
      if (!(d > 0.0)) return;
      d = std::sqrt(d);
      m[j * k + j] = d;
      for (std::size_t i = j + 1; i < k; ++i) {
        double t = m[i * k + j];
        for (std::size_t q = 0; q < j; ++q) t -= m[i * k + q] * m[j * k + q];
        m[i * k + j] = t / d;
      }
    }
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t q = 0; q < i; ++q) rhs[i] -= m[i * k + q] * rhs[q];
      rhs[i] /= m[i * k + i];
    }
    for (std::size_t i = k; i-- > 0;) {
      for (std::size_t q = i + 1; q < k; ++q) rhs[i] -= m[q * k + i] * rhs[q];
      rhs[i] /= m[i * k + i];
    }
    for (std::size_t i = 0; i < k; ++i) {
      if (!std::isfinite(rhs[i])) {
        std::copy(g.begin(), g.end(), out.begin());
        return;
      }
      simd::axpy(-rhs[i], dg_[i], out);
    }
  }

 private:
  std::size_t len_, mem_;
  std::size_t count_ = 0, head_ = 0;
  bool have_prev_ = false;
  std::vector<double> f_, prev_f_, prev_g_;
  std::vector<std::vector<double>> df_, dg_;
};

}  // namespace

ConicSolution solve(const ConicProblem& p, const SolverOptions& opt) {
  p.validate();
  require(opt.tol > 0.0, "solve: tol must be positive");
  require(opt.max_iter > 0, "solve: max_iter must be positive");
  require(opt.check_every > 0, "solve: check_every must be positive");
  require(opt.rho > 0.0 && opt.relaxation > 0.0 && opt.relaxation < 2.0, "solve: invalid step parameters");
  const std::size_t n = p.variable_count();
  if (n > opt.max_variables) {
    fail(ErrorKind::SizeCap, "conic problem has " + std::to_string(n) + " variables, above the cap of " +
                                 std::to_string(opt.max_variables));
  }

  const std::size_t nb = p.blocks.size();
  std::vector<std::size_t> offsets(nb);
  for (std::size_t b = 0, off = 0; b < nb; ++b) {
    offsets[b] = off;
    off += p.blocks[b].dim * p.blocks[b].dim;
  }
  const std::size_t m = p.constraints.size();
  const ConstraintMap amap(p, offsets, n);
  GramSolver gsolve(amap, opt.dense_gram_limit);

  // ADMM state (z, u) stored contiguously as interleaved doubles.
  std::vector<cplx> state(2 * n, cplx(0.0)), image(2 * n), next(2 * n), plain(2 * n);
  std::vector<cplx> c(n), v(n), x(n), scratch(n);
  load_blocks(p.objective, offsets, c);
  std::vector<double> b(m), w(m, 0.0), av(m), y(m, 0.0), neg(m);
  for (std::size_t i = 0; i < m; ++i) b[i] = p.constraints[i].rhs;
  const double bnorm = norm(std::span<const double>(b));
  const double cnorm = norm(std::span<const cplx>(c));
  auto z_of = [n](std::vector<cplx>& s) { return std::span<cplx>(s.data(), n); };
  auto u_of = [n](std::vector<cplx>& s) { return std::span<cplx>(s.data() + n, n); };

  double rho = opt.rho;
  if (const WarmStart* ws = opt.warm_start) {
    if (!ws->primal.empty()) {
      require(ws->primal.size() == nb, "warm start: primal block count mismatch");
      for (std::size_t k = 0; k < nb; ++k) require(ws->primal[k].dim() == p.blocks[k].dim, "warm start: primal dimension mismatch");
      load_blocks(ws->primal, offsets, z_of(state));
    }
    if (!ws->dual_slack.empty()) {
      require(ws->dual_slack.size() == nb, "warm start: slack block count mismatch");
      for (std::size_t k = 0; k < nb; ++k) require(ws->dual_slack[k].dim() == p.blocks[k].dim, "warm start: slack dimension mismatch");
      const auto u = u_of(state);
      load_blocks(ws->dual_slack, offsets, u);
      for (auto& e : u) e *= -1.0 / rho;
    }
  }

  auto project_cone = [&](std::span<const cplx> src, std::span<cplx> dst) {
    for (std::size_t k = 0; k < nb; ++k) {
      const std::size_t d = p.blocks[k].dim, off = offsets[k];
      if (p.blocks[k].kind == BlockKind::Free) {
        std::copy(src.begin() + off, src.begin() + off + d * d, dst.begin() + off);
        continue;
      }
      const HermitianMatrix blk(CMatrix(d, std::vector<cplx>(src.begin() + off, src.begin() + off + d * d)));
      const auto e = linalg::eig(blk);
      const HermitianMatrix proj = e.values.back() >= 0.0 ? blk : e.apply([](double l) { return l > 0.0 ? l : 0.0; });
      const auto pe = proj.entries();
      std::copy(pe.begin(), pe.end(), dst.begin() + off);
    }
  };

  const double alpha = opt.relaxation;
  auto rv = simd::as_reals(std::span<cplx>(v));
  auto rx = simd::as_reals(std::span<cplx>(x));
  auto rs = simd::as_reals(std::span<cplx>(scratch));
  const auto rc = simd::as_reals(std::span<const cplx>(c));

  // image <- T(state); leaves x and w of the affine step.
  auto admm_map = [&]() {
    const auto rz = simd::as_reals(std::span<const cplx>(z_of(state)));
    const auto ru = simd::as_reals(std::span<const cplx>(u_of(state)));
    // x = v - A^T (A A^T)^{-1} (A v - b), v = z - u - c/rho.
    simd::sub(rz, ru, rv);
    simd::axpy(-1.0 / rho, rc, rv);
    amap.apply(v, av);
    for (std::size_t i = 0; i < m; ++i) av[i] -= b[i];
    gsolve.solve(av, w, n);
    std::copy(v.begin(), v.end(), x.begin());
    for (std::size_t i = 0; i < m; ++i) neg[i] = -w[i];
    amap.apply_adjoint(neg, x);
    // scratch = x_hat + u, z+ = Pi_K(scratch), u+ = scratch - z+.
    std::copy(ru.begin(), ru.end(), rs.begin());
    simd::axpy(alpha, rx, rs);
    simd::axpy(1.0 - alpha, rz, rs);
    project_cone(scratch, z_of(image));
    simd::sub(rs, simd::as_reals(std::span<const cplx>(z_of(image))), simd::as_reals(u_of(image)));
  };

  const std::size_t memory = 8 * n * opt.anderson_memory <= (std::size_t{1} << 27) ? opt.anderson_memory : 0;
  Anderson accel(4 * n, memory);
  const auto rstate = simd::as_reals(std::span<cplx>(state));
  const auto rimage = simd::as_reals(std::span<cplx>(image));
  const auto rnext = simd::as_reals(std::span<cplx>(next));
  const auto rplain = simd::as_reals(std::span<cplx>(plain));
  bool accelerated = false;
  double last_fp = 0.0;

  ConicSolution sol;
  const double scale_limit = 1e12 * (1.0 + bnorm + cnorm);
  long it = 0;
  for (;;) {
    ++it;
    admm_map();
    simd::sub(rimage, rstate, rnext);
    const double fp = std::sqrt(simd::norm_sq(rnext));
    if (accelerated && fp > last_fp) {
      // Safeguard: the extrapolated state did worse; fall back to the plain iterate.
      std::copy(plain.begin(), plain.end(), state.begin());
      accel.reset();
      accelerated = false;
      continue;
    }

    const bool last = it >= opt.max_iter;
    if (it % opt.check_every == 0 || last) {
      // y = -rho w, s = -rho u+, primal iterate z+.
      const auto zt = z_of(image);
      const auto ut = u_of(image);
      for (std::size_t i = 0; i < m; ++i) y[i] = -rho * w[i];
      amap.apply(zt, av);
      for (std::size_t i = 0; i < m; ++i) av[i] -= b[i];
      const double rp = norm(std::span<const double>(av)) / (1.0 + bnorm);
      std::copy(c.begin(), c.end(), scratch.begin());
      for (std::size_t i = 0; i < m; ++i) neg[i] = -y[i];
      amap.apply_adjoint(neg, scratch);
      simd::axpy(rho, simd::as_reals(std::span<const cplx>(ut)), rs);
      const double rd = norm(std::span<const cplx>(scratch)) / (1.0 + cnorm);
      const double pobj = real_inner(c, zt);
      double dobj = 0.0;
      for (std::size_t i = 0; i < m; ++i) dobj += b[i] * y[i];
      const double gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));

      if (opt.debug_checks) {
        // pobj - dobj = <s, z> + <r_d, z> + y^T (A z - b) with <s, z> >= 0.
        double corr = std::abs(real_inner(scratch, zt));
        for (std::size_t i = 0; i < m; ++i) corr += std::abs(y[i] * av[i]);
        const double slack = 1e-9 * (1.0 + std::abs(pobj) + std::abs(dobj) + norm(std::span<const cplx>(zt)));
        if (pobj - dobj < -corr - slack)
          throw NumericalError("weak duality violated at iteration " + std::to_string(it), dobj - pobj);
      }

      sol.iterations = it;
      sol.primal_objective = pobj;
      sol.dual_objective = dobj;
      sol.primal_residual = rp;
      sol.dual_residual = rd;
      sol.gap = gap;

      if (std::max({rp, rd, gap}) <= opt.tol) {
        sol.status = Status::Optimal;
        break;
      }
      if (!std::isfinite(pobj) || !std::isfinite(dobj) || norm(std::span<const cplx>(zt)) > scale_limit ||
          rho * norm(std::span<const cplx>(ut)) > scale_limit) {
        sol.status = Status::InfeasibleSuspected;
        break;
      }
      if (last) {
        sol.status = Status::MaxIterations;
        break;
      }
      if (opt.adaptive_rho && it % (5 * opt.check_every) == 0) {
        double factor = rd > 0.0 && rp > 0.0 ? std::sqrt(rp / rd) : 1.0;
        factor = std::clamp(factor, 1e-6 / rho, 1e6 / rho);
        if (factor > 5.0 || factor < 0.2) {
          rho *= factor;
          for (auto& e : u_of(image)) e /= factor;
          std::copy(image.begin(), image.end(), state.begin());
          accel.reset();
          accelerated = false;
          continue;
        }
      }
    }

    if (memory == 0) {
      std::copy(image.begin(), image.end(), state.begin());
      continue;
    }
    std::copy(image.begin(), image.end(), plain.begin());
    accel.step(rstate, rimage, rnext);
    std::copy(next.begin(), next.end(), state.begin());
    accelerated = true;
    last_fp = fp;
  }

  sol.primal.reserve(nb);
  for (std::size_t k = 0; k < nb; ++k) sol.primal.push_back(block_view(image, offsets[k], p.blocks[k].dim));
  sol.dual = y;
  return sol;
}

CertificateReport check_certificate(const ConicProblem& p, const ConicSolution& s, double tol) {
  p.validate();
  require(s.primal.size() == p.blocks.size(), "check_certificate: primal block count mismatch");
  require(s.dual.size() == p.constraints.size(), "check_certificate: dual length mismatch");
  CertificateReport rep;
  const std::size_t nb = p.blocks.size();

  auto fmt = [](const char* what, std::size_t idx, double v) {
    std::ostringstream o;
    o << what << ' ' << idx << ": " << std::setprecision(6) << v;
    return o.str();
  };

  double pobj = 0.0;
  for (std::size_t k = 0; k < nb; ++k) {
    require(s.primal[k].dim() == p.blocks[k].dim, "check_certificate: primal dimension mismatch");
    pobj += linalg::inner(p.objective[k], s.primal[k]);
    if (p.blocks[k].kind != BlockKind::Psd) continue;
    const double lmin = linalg::min_eigenvalue(s.primal[k]);
    rep.worst_primal_eigenvalue = std::min(rep.worst_primal_eigenvalue, lmin);
    if (lmin < -tol * std::max(1.0, s.primal[k].frobenius_norm()))
      rep.violations.push_back({Violation::Kind::PrimalPsd, k, -lmin, fmt("primal block not PSD, min eigenvalue of block", k, lmin)});
  }

  std::vector<HermitianMatrix> slack = p.objective;
  double dobj = 0.0;
  for (std::size_t i = 0; i < p.constraints.size(); ++i) {
    const auto& con = p.constraints[i];
    double lhs = 0.0;
    for (const auto& t : con.terms) {
      lhs += linalg::inner(t.coeff, s.primal[t.block]);
      slack[t.block] -= t.coeff * s.dual[i];
    }
    dobj += con.rhs * s.dual[i];
    const double res = std::abs(lhs - con.rhs);
    rep.max_equality_residual = std::max(rep.max_equality_residual, res);
    if (res > tol * (1.0 + std::abs(con.rhs)))
      rep.violations.push_back({Violation::Kind::Equality, i, res, fmt("equality residual of constraint", i, res)});
  }

  for (std::size_t k = 0; k < nb; ++k) {
    const double scale = 1.0 + p.objective[k].frobenius_norm();
    if (p.blocks[k].kind == BlockKind::Psd) {
      const double lmin = linalg::min_eigenvalue(slack[k]);
      rep.worst_dual_eigenvalue = std::min(rep.worst_dual_eigenvalue, lmin);
      if (lmin < -tol * scale)
        rep.violations.push_back({Violation::Kind::DualSlackPsd, k, -lmin, fmt("dual slack not PSD, min eigenvalue of block", k, lmin)});
    } else {
      const double r = slack[k].frobenius_norm();
      rep.max_free_dual_residual = std::max(rep.max_free_dual_residual, r);
      if (r > tol * scale)
        rep.violations.push_back({Violation::Kind::DualFreeBlock, k, r, fmt("dual residual on free block", k, r)});
    }
  }

  rep.gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
  if (rep.gap > tol) rep.violations.push_back({Violation::Kind::Gap, 0, rep.gap, fmt("relative duality gap", 0, rep.gap)});
  return rep;
}

void write_problem_text(const ConicProblem& p, std::ostream& out) {
  p.validate();
  auto write_matrix = [&](const HermitianMatrix& mtx) {
    for (std::size_t i = 0; i < mtx.dim(); ++i) {
      for (std::size_t j = 0; j < mtx.dim(); ++j) {
        if (j) out << "  ";
        out << mtx(i, j).real() << ' ' << mtx(i, j).imag();
      }
      out << '\n';
    }
  };
  const auto old_precision = out.precision(17);
  out << "GUESSWORK-CONIC 1\n";
  out << "BLOCKS " << p.blocks.size() << '\n';
  for (const auto& b : p.blocks) out << b.dim << ' ' << (b.kind == BlockKind::Psd ? "psd" : "free") << '\n';
  out << "OBJECTIVE\n";
  for (std::size_t k = 0; k < p.blocks.size(); ++k) {
    out << "BLOCK " << k << '\n';
    write_matrix(p.objective[k]);
  }
  out << "CONSTRAINTS " << p.constraints.size() << '\n';
  for (std::size_t i = 0; i < p.constraints.size(); ++i) {
    const auto& c = p.constraints[i];
    out << "CONSTRAINT " << i << " RHS " << c.rhs << " TERMS " << c.terms.size() << '\n';
    for (const auto& t : c.terms) {
      out << "BLOCK " << t.block << '\n';
      write_matrix(t.coeff);
    }
  }
  out.precision(old_precision);
}

}  // namespace guesswork::sdp
