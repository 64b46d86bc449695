// Text export of the mixed-integer SDP
//
//   minimize   Re sum p(x) (rho_x)_{kl} c_y y[x,y,l,k,j]
//   over       F_j PSD (d x d), P_j binary |X| x |X|, y complex
//   subject to sum_j F_j = I, P_j doubly stochastic, and for each y-variable
//              the four big-M inequalities tying y = P_j[x,y] F_j[l,k].
//
// Inequalities between complex quantities hold separately for the real and
// imaginary parts (the P term is real).

#include <iomanip>
#include <sstream>

#include "guesswork/error.hpp"
#include "guesswork/solver/guesswork.hpp"

namespace guesswork {

namespace {

std::string yname(std::size_t x, std::size_t y, std::size_t l, std::size_t k, std::size_t j) {
  std::ostringstream o;
  o << "y[" << x + 1 << ',' << y + 1 << ',' << l + 1 << ',' << k + 1 << ',' << j + 1 << ']';
  return o.str();
}

std::string fname(std::size_t j, std::size_t l, std::size_t k) {
  std::ostringstream o;
  o << 'F' << j + 1 << '[' << l + 1 << ',' << k + 1 << ']';
  return o.str();
}

std::string pname(std::size_t j, std::size_t x, std::size_t y) {
  std::ostringstream o;
  o << 'P' << j + 1 << '[' << x + 1 << ',' << y + 1 << ']';
  return o.str();
}

}  // namespace

MisdpDocument export_misdp(const CqEnsemble& ens, const CostVector& cv, std::size_t outcomes) {
  require(cv.K() == ens.size(), "export_misdp requires K = |X|");
  require(outcomes >= 1, "export_misdp: need at least one outcome");
  const std::size_t n = ens.size(), d = ens.dim(), M = outcomes;
  // |F_lk| <= 1 because 0 <= F_j <= I; d/2 is the customary bound and covers it for d >= 2.
  const double bound = std::max(1.0, static_cast<double>(d) / 2.0);

  MisdpDocument doc;
  doc.outcomes = M;
  doc.psd_blocks = M;
  doc.binary_blocks = M;
  doc.linearization_variables = n * n * d * d * M;
  doc.exact = M >= d * d;

  std::ostringstream o;
  o << std::setprecision(17);
  o << "GUESSWORK-MISDP 1\n";
  o << "META letters " << n << " dim " << d << " outcomes " << M << " mode "
    << (doc.exact ? "exact-value" : "upper-bound") << " entry_bound " << bound << '\n';
  o << "LETTERS";
  for (const auto& l : ens.letters()) o << ' ' << l;
  o << '\n';

  o << "BLOCKS " << M << '\n';
  for (std::size_t j = 0; j < M; ++j) o << 'F' << j + 1 << " psd hermitian " << d << '\n';
  o << "BINARIES " << M << '\n';
  for (std::size_t j = 0; j < M; ++j) o << 'P' << j + 1 << ' ' << n << ' ' << n << '\n';
  o << "CONTINUOUS " << doc.linearization_variables << " complex\n";

  o << "LINEAR\n";
  for (std::size_t l = 0; l < d; ++l)
    for (std::size_t k = 0; k < d; ++k) {
      o << "EQ";
      for (std::size_t j = 0; j < M; ++j) o << (j ? " + " : " ") << fname(j, l, k);
      o << " = " << (l == k ? 1 : 0) << '\n';
      ++doc.equalities;
    }
  for (std::size_t j = 0; j < M; ++j) {
    for (std::size_t x = 0; x < n; ++x) {
      o << "EQ";
      for (std::size_t y = 0; y < n; ++y) o << (y ? " + " : " ") << pname(j, x, y);
      o << " = 1\n";
      ++doc.equalities;
    }
    for (std::size_t y = 0; y < n; ++y) {
      o << "EQ";
      for (std::size_t x = 0; x < n; ++x) o << (x ? " + " : " ") << pname(j, x, y);
      o << " = 1\n";
      ++doc.equalities;
    }
  }
  for (std::size_t j = 0; j < M; ++j)
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y)
        for (std::size_t l = 0; l < d; ++l)
          for (std::size_t k = 0; k < d; ++k) {
            const std::string v = yname(x, y, l, k, j), p = pname(j, x, y), f = fname(j, l, k);
            o << "INEQ " << v << " + " << bound << ' ' << p << " >= 0\n";
            o << "INEQ " << v << " - " << bound << ' ' << p << " - " << f << " >= " << -bound << '\n';
            o << "INEQ " << v << " - " << bound << ' ' << p << " <= 0\n";
            o << "INEQ " << v << " + " << bound << ' ' << p << " - " << f << " <= " << bound << '\n';
            doc.inequalities += 4;
          }

  o << "OBJECTIVE minimize real-part\n";
  for (std::size_t j = 0; j < M; ++j)
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y)
        for (std::size_t l = 0; l < d; ++l)
          for (std::size_t k = 0; k < d; ++k) {
            const cplx coef = ens.prob(x) * cv.cost(y + 1) * ens.state(x)(k, l);
            o << coef.real() << ' ' << coef.imag() << ' ' << yname(x, y, l, k, j) << '\n';
          }
  o << "END\n";
  doc.text = o.str();
  return doc;
}

}  // namespace guesswork
