#include "xnet/stbc.hpp"

#include <cmath>

namespace xnet {

namespace {

constexpr cxd kJ{0.0, 1.0};

// Entry layout of the 3-antenna code.  xr/xi are the real and imaginary
// parts of the 6 source symbols.
CMat layout_3tx(const double* xr, const double* xi, double theta) {
  const cxd e = std::polar(1.0, theta);
  CMat x(3, 4);
  x(0, 0) = xr[0] + kJ * xi[2];
  x(0, 1) = -xr[1] + kJ * xi[3];
  x(0, 2) = e * (xr[4] + kJ * xi[5]);
  x(0, 3) = e * (-xr[2] + kJ * xi[0]);
  x(1, 0) = xr[1] + kJ * xi[3];
  x(1, 1) = xr[0] - kJ * xi[2];
  x(1, 2) = e * (xr[3] + kJ * xi[1]);
  x(1, 3) = e * (xr[4] - kJ * xi[5]);
  x(2, 0) = e * (xr[5] + kJ * xi[4]);
  x(2, 1) = e * (-xr[5] + kJ * xi[4]);
  x(2, 2) = xr[2] + kJ * xi[0];
  x(2, 3) = -xr[3] + kJ * xi[1];
  return x;
}

CMat layout_4tx(const double* xr, const double* xi, double theta) {
  const cxd e = std::polar(1.0, theta);
  CMat x(4, 4);
  x(0, 0) = xr[0] + kJ * xi[2];
  x(0, 1) = -xr[1] + kJ * xi[3];
  x(0, 2) = e * (xr[4] + kJ * xi[6]);
  x(0, 3) = e * (-xr[5] + kJ * xi[7]);
  x(1, 0) = xr[1] + kJ * xi[3];
  x(1, 1) = xr[0] - kJ * xi[2];
  x(1, 2) = e * (xr[5] + kJ * xi[7]);
  x(1, 3) = e * (xr[4] - kJ * xi[6]);
  x(2, 0) = e * (xr[6] + kJ * xi[4]);
  x(2, 1) = e * (-xr[7] + kJ * xi[5]);
  x(2, 2) = xr[2] + kJ * xi[0];
  x(2, 3) = -xr[3] + kJ * xi[1];
  x(3, 0) = e * (xr[7] + kJ * xi[5]);
  x(3, 1) = e * (xr[6] - kJ * xi[4]);
  x(3, 2) = xr[3] + kJ * xi[1];
  x(3, 3) = xr[2] - kJ * xi[0];
  return x;
}

CMat layout_alamouti(const double* xr, const double* xi, double) {
  CMat x(2, 2);
  const cxd x1{xr[0], xi[0]}, x2{xr[1], xi[1]};
  x(0, 0) = x1;
  x(0, 1) = -std::conj(x2);
  x(1, 0) = x2;
  x(1, 1) = std::conj(x1);
  return x;
}

using LayoutFn = CMat (*)(const double*, const double*, double);

// Dispersion matrices by linearity: evaluate the layout at unit components.
LinearDispersionCode from_layout(std::string name, int m, int t_prime, int l,
                                 LayoutFn fn, double theta) {
  LinearDispersionCode code;
  code.name = std::move(name);
  code.theta = theta;
  code.m = m;
  code.t_prime = t_prime;
  code.l = l;
  std::vector<double> xr(l, 0.0), xi(l, 0.0);
  for (int k = 0; k < l; ++k) {
    xr[k] = 1.0;
    code.a_re.push_back(fn(xr.data(), xi.data(), theta));
    xr[k] = 0.0;
    xi[k] = 1.0;
    code.a_im.push_back(fn(xr.data(), xi.data(), theta));
    xi[k] = 0.0;
  }
  return code;
}

void record_sigma(LinearDispersionCode& code) {
  code.sigma_sq.clear();
  for (const auto& map : code.cancel)
    for (const auto& a : map.alpha) code.sigma_sq.push_back(std::norm(a));
}

}  // namespace

LinearDispersionCode proposed_3tx_code(double theta) {
  LinearDispersionCode code = from_layout("proposed3", 3, 4, 6, layout_3tx, theta);
  const cxd e1 = std::polar(1.0, theta);
  const cxd e2 = std::polar(1.0, 2.0 * theta);
  // columns 1<-2: rows (1,2) swap with -conj/+conj, row 3 in place with +e^{2j theta} conj
  code.cancel.push_back({{1, 0, 2}, {-1.0, 1.0, e2}});
  // columns 3<-4
  code.cancel.push_back({{1, 2, 0}, {-e2, e1, e1}});
  record_sigma(code);
  return code;
}

LinearDispersionCode sr_4tx_code(double theta) {
  LinearDispersionCode code = from_layout("sr4", 4, 4, 8, layout_4tx, theta);
  const cxd e2 = std::polar(1.0, 2.0 * theta);
  code.cancel.push_back({{1, 0, 3, 2}, {-1.0, 1.0, -e2, e2}});
  code.cancel.push_back({{1, 0, 3, 2}, {-e2, e2, -1.0, 1.0}});
  record_sigma(code);
  return code;
}

LinearDispersionCode alamouti_code() {
  LinearDispersionCode code = from_layout("alamouti", 2, 2, 2, layout_alamouti, 0.0);
  code.cancel.push_back({{1, 0}, {-1.0, 1.0}});
  record_sigma(code);
  return code;
}

void encode_into(const LinearDispersionCode& code, const CVec& symbols, CMat& out) {
  if (symbols.size() != code.l) throw DimensionMismatch("encode: symbol count mismatch");
  out.setZero(code.m, code.t_prime);
  for (int k = 0; k < code.l; ++k) {
    out.noalias() += code.a_re[k] * symbols(k).real();
    out.noalias() += code.a_im[k] * symbols(k).imag();
  }
}

CMat encode(const LinearDispersionCode& code, const CVec& symbols) {
  CMat out;
  encode_into(code, symbols, out);
  return out;
}

Codeword make_codeword(const LinearDispersionCode& code, const CVec& symbols) {
  return {code.name, symbols, encode(code, symbols)};
}

CancellationVerdict verify_column_cancellation(const LinearDispersionCode& code) {
  CancellationVerdict v;
  if (code.cancel.size() != static_cast<std::size_t>(code.t_prime / 2))
    throw DimensionMismatch("verify_column_cancellation: cancel_spec incomplete");
  for (int d = 0; d < 2 * code.l; ++d) {
    const CMat& a = d < code.l ? code.a_re[d] : code.a_im[d - code.l];
    for (int pair = 0; pair < code.t_prime / 2; ++pair) {
      const int p = 2 * pair;
      const CancelMap& map = code.cancel[pair];
      for (int r = 0; r < code.m; ++r) {
        const cxd resid = a(r, p) + map.alpha[r] * std::conj(a(map.perm[r], p + 1));
        if (std::abs(resid) > 1e-12) {
          return {false, d, p, r, std::abs(resid)};
        }
      }
    }
  }
  return v;
}

CMat interleave_zero_columns(const CMat& x_prime, RxSide dest) {
  const Eigen::Index m = x_prime.rows();
  const Eigen::Index tp = x_prime.cols();
  if (tp % 2 != 0) throw DimensionMismatch("interleave: column count must be even");
  CMat out = CMat::Zero(m, 3 * tp / 2);
  for (Eigen::Index c = 0; c < tp; ++c) {
    const Eigen::Index block = c / 2, off = c % 2;
    const Eigen::Index slot = 3 * block + off + (dest == RxSide::rx1 ? 0 : 1);
    out.col(slot) = x_prime.col(c);
  }
  return out;
}

CMat difference_matrix(const Codeword& c1, const Codeword& c2) {
  if (c1.code_name != c2.code_name)
    throw CodeMismatch("difference_matrix: codewords from different codes");
  if (c1.matrix.rows() != c2.matrix.rows() || c1.matrix.cols() != c2.matrix.cols())
    throw CodeMismatch("difference_matrix: shape mismatch");
  return c1.matrix - c2.matrix;
}

}  // namespace xnet
