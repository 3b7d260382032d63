// Cluster-size law of K_n from the connectivity recursion
//   P(|C(0)| = k) = C(n-1, k-1) c_k q^{k(n-k)},
//   c_k = 1 - sum_{j<k} C(k-1, j-1) c_j q^{j(k-j)},
// with q = 1 - p and c_k = P(K_k connected). The subtraction loses roughly
// (k-1) log2(1/p) bits for small p, so it is evaluated in MPFR and the
// working precision is doubled until two precisions agree.

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "percolab/csv.hpp"
#include "percolab/errors.hpp"
#include "percolab/exact.hpp"

namespace percolab {

namespace {

constexpr std::uint32_t kMaxCompleteN = 2000;

class MpArray {
 public:
  MpArray(std::size_t n, mpfr_prec_t prec) : v_(n) {
    for (auto& x : v_) {
      mpfr_init2(&x, prec);
      mpfr_set_zero(&x, 1);
    }
  }
  ~MpArray() {
    for (auto& x : v_) mpfr_clear(&x);
  }
  MpArray(const MpArray&) = delete;
  MpArray& operator=(const MpArray&) = delete;
  mpfr_ptr operator[](std::size_t i) { return &v_[i]; }

 private:
  std::vector<__mpfr_struct> v_;
};

std::vector<double> law_at_precision(std::uint32_t n, double p, mpfr_prec_t prec) {
  MpArray qpow(n + 1, prec), c(n + 1, prec), row(n + 1, prec), Q(n + 1, prec), tmp(3, prec);
  mpfr_ptr q = tmp[0], sum = tmp[1], term = tmp[2];
  mpfr_set_d(q, p, MPFR_RNDN);
  mpfr_ui_sub(q, 1, q, MPFR_RNDN);

  mpfr_set_ui(qpow[0], 1, MPFR_RNDN);
  for (std::uint32_t j = 1; j <= n; ++j) mpfr_mul(qpow[j], qpow[j - 1], q, MPFR_RNDN);

  mpfr_set_ui(c[1], 1, MPFR_RNDN);
  mpfr_set_ui(row[0], 1, MPFR_RNDN);  // row m of Pascal's triangle, m = k - 1
  for (std::uint32_t k = 2; k <= n; ++k) {
    const std::uint32_t m = k - 1;
    mpfr_set_ui(row[m], 1, MPFR_RNDN);
    for (std::uint32_t i = m - 1; i >= 1; --i) mpfr_add(row[i], row[i], row[i - 1], MPFR_RNDN);
    // Q[j] = q^{j(k-j)}
    for (std::uint32_t j = 1; j + 1 < k; ++j) mpfr_mul(Q[j], Q[j], qpow[j], MPFR_RNDN);
    mpfr_set(Q[k - 1], qpow[k - 1], MPFR_RNDN);

    mpfr_set_zero(sum, 1);
    for (std::uint32_t j = 1; j < k; ++j) {
      mpfr_mul(term, row[j - 1], c[j], MPFR_RNDN);
      mpfr_mul(term, term, Q[j], MPFR_RNDN);
      mpfr_add(sum, sum, term, MPFR_RNDN);
    }
    mpfr_ui_sub(c[k], 1, sum, MPFR_RNDN);
  }

  // After the loop, row holds C(n-1, .) and Q[j] = q^{j(n-j)} for j < n.
  std::vector<double> law(n + 1, 0.0);
  for (std::uint32_t k = 1; k <= n; ++k) {
    mpfr_mul(term, row[k - 1], c[k], MPFR_RNDN);
    if (k < n) mpfr_mul(term, term, Q[k], MPFR_RNDN);
    law[k] = mpfr_get_d(term, MPFR_RNDN);
  }
  return law;
}

bool agree(const std::vector<double>& a, const std::vector<double>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(std::abs(a[i] - b[i]) <= 1e-18 + 1e-13 * std::abs(b[i]))) return false;
  }
  return true;
}

}  // namespace

std::vector<double> complete_cluster_law(std::uint32_t n, double p) {
  if (n < 2) throw InvalidParameter("complete graph needs n >= 2");
  if (n > kMaxCompleteN) {
    throw RangeError("complete_cluster_law supports n <= " + std::to_string(kMaxCompleteN) + ", got " +
                     std::to_string(n));
  }
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidParameter("p must lie in [0, 1]");
  std::vector<double> law(n + 1, 0.0);
  if (p == 0.0) {
    law[1] = 1.0;
    return law;
  }
  if (p == 1.0) {
    law[n] = 1.0;
    return law;
  }
  const mpfr_prec_t cap = 64 * static_cast<mpfr_prec_t>(n) + 8192;
  mpfr_prec_t prec = static_cast<mpfr_prec_t>(n) + 128;
  law = law_at_precision(n, p, prec);
  for (;;) {
    const mpfr_prec_t finer = 2 * prec + 64;
    auto check = law_at_precision(n, p, finer);
    if (agree(law, check)) {
      law = std::move(check);
      break;
    }
    if (finer > cap) {
      throw RangeError("complete_cluster_law(n=" + std::to_string(n) + ", p=" + format_double(p) +
                       ") did not stabilize below " + std::to_string(cap) + " bits");
    }
    prec = finer;
    law = std::move(check);
  }
  double total = 0.0;
  for (double x : law) {
    if (x < 0.0) throw RangeError("complete_cluster_law produced a negative probability");
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-10) {
    throw RangeError("complete_cluster_law mass " + format_double(total) + " differs from 1");
  }
  return law;
}

double complete_chi(std::uint32_t n, double p) {
  const auto law = complete_cluster_law(n, p);
  double chi = 0.0;
  for (std::uint32_t k = 1; k <= n; ++k) chi += static_cast<double>(k) * law[k];
  return chi;
}

}  // namespace percolab
