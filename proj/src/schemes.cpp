#include "xnet/schemes.hpp"

#include <cmath>

namespace xnet {

namespace {

CMat inverse_normalized(const CMat& h) {
  CMat inv = inverse(h);
  return inv / std::sqrt((inv * inv.adjoint()).trace().real());
}

}  // namespace

Precoders ljj_precoders(const ChannelRealization& ch) {
  try {
    Precoders v;
    v.v11 = inverse_normalized(ch(0, 1));  // H_12
    v.v12 = inverse_normalized(ch(0, 0));  // H_11
    v.v21 = inverse_normalized(ch(1, 1));  // H_22
    v.v22 = inverse_normalized(ch(1, 0));  // H_21
    return v;
  } catch (const SingularMatrix&) {
    throw ChannelDegenerate("ljj_precoders: singular channel matrix");
  }
}

std::pair<CMat, CMat> ljj_transmit(const Precoders& v, const CMat& x11p, const CMat& x12p,
                                   const CMat& x21p, const CMat& x22p, double share) {
  const double s = std::sqrt(share);
  CMat x1 = s * (v.v11 * interleave_zero_columns(x11p, RxSide::rx1) +
                 v.v12 * interleave_zero_columns(x12p, RxSide::rx2));
  CMat x2 = s * (v.v21 * interleave_zero_columns(x21p, RxSide::rx1) +
                 v.v22 * interleave_zero_columns(x22p, RxSide::rx2));
  return {std::move(x1), std::move(x2)};
}

CMat receive_cancel_rx1(const CMat& y, const LinearDispersionCode& code) {
  const int m = code.m, tp = code.t_prime;
  if (y.rows() != m || y.cols() != 3 * tp / 2)
    throw DimensionMismatch("receive_cancel_rx1: shape mismatch");
  CMat out(m, tp);
  for (int pair = 0; pair < tp / 2; ++pair) {
    const CancelMap& map = code.cancel[pair];
    // desired column p: observed clean at slot 3*pair; desired column p+1 is
    // contaminated at slot 3*pair+1 and cleaned with the pure-interference
    // slot 3*pair+2 through the forward maps.
    out.col(2 * pair) = y.col(3 * pair);
    for (int r = 0; r < m; ++r)
      out(r, 2 * pair + 1) =
          y(r, 3 * pair + 1) + map.alpha[r] * std::conj(y(map.perm[r], 3 * pair + 2));
  }
  return out;
}

CMat receive_cancel_rx2(const CMat& y, const LinearDispersionCode& code) {
  const int m = code.m, tp = code.t_prime;
  if (y.rows() != m || y.cols() != 3 * tp / 2)
    throw DimensionMismatch("receive_cancel_rx2: shape mismatch");
  CMat out(m, tp);
  for (int pair = 0; pair < tp / 2; ++pair) {
    const CancelMap& map = code.cancel[pair];
    // interferers place codeword column p at slot 3*pair (pure) and column
    // p+1 on top of the desired column p at slot 3*pair+1; invert the maps:
    // X'(r, p+1) = conj(-X'(k, p) / alpha[k]) with k = perm^{-1}(r).
    std::vector<int> inv(m);
    for (int r = 0; r < m; ++r) inv[map.perm[r]] = r;
    for (int r = 0; r < m; ++r) {
      const int k = inv[r];
      out(r, 2 * pair) =
          y(r, 3 * pair + 1) + std::conj(y(k, 3 * pair)) / std::conj(map.alpha[k]);
    }
    out.col(2 * pair + 1) = y.col(3 * pair + 2);
  }
  return out;
}

std::array<double, 4> cancel_noise_variance(const LinearDispersionCode& code, RxSide side) {
  // cleaned slots pick up an extra |alpha|^2 (= sigma^2) worth of noise
  std::array<double, 4> var{1.0, 1.0, 1.0, 1.0};
  for (int pair = 0; pair < code.t_prime / 2; ++pair) {
    const int cleaned = side == RxSide::rx1 ? 2 * pair + 1 : 2 * pair;
    var[cleaned] = 2.0;  // unit-modulus maps for every built-in code
  }
  return var;
}

CMat build_effective_r(const CMat& hhat, const CMat& ghat, double theta) {
  const cxd e = std::polar(1.0, theta);
  const cxd em = std::conj(e);
  CMat r(6, 6);
  for (int i = 0; i < 3; ++i) {
    const auto h = hhat.row(i), g = ghat.row(i);
    r.row(2 * i) << h(0), h(1), e * h(2), g(0), g(1), e * g(2);
    r.row(2 * i + 1) << std::conj(h(1)), -std::conj(h(0)), -em * std::conj(h(2)),
        std::conj(g(1)), -std::conj(g(0)), -em * std::conj(g(2));
  }
  return r;
}

CMat build_effective_s(const CMat& hhat, const CMat& ghat, double theta) {
  const cxd e = std::polar(1.0, theta);
  const cxd em = std::conj(e);
  CMat s(6, 6);
  for (int i = 0; i < 3; ++i) {
    const auto h = hhat.row(i), g = ghat.row(i);
    s.row(2 * i) << h(0), em * h(2), h(1), g(0), em * g(2), g(1);
    s.row(2 * i + 1) << std::conj(h(1)), -std::conj(h(0)), -e * std::conj(h(2)),
        std::conj(g(1)), -std::conj(g(0)), -e * std::conj(g(2));
  }
  return s;
}

std::pair<CMat, CMat> ljj3_effective_matrices(const ChannelRealization& ch, double theta) {
  if (ch.m != 3) throw DimensionMismatch("ljj3_effective_matrices: need 3 antennas");
  const Precoders v = ljj_precoders(ch);
  const CMat hhat = ch(0, 0) * v.v11;
  const CMat ghat = ch(1, 0) * v.v21;
  return {build_effective_r(hhat, ghat, theta), build_effective_s(hhat, ghat, theta)};
}

std::pair<CVec, CVec> vectorize_processed(const CMat& y_processed, double theta) {
  const cxd e = std::polar(1.0, theta);
  CVec zr(6), zs(6);
  for (int i = 0; i < 3; ++i) {
    zr(2 * i) = y_processed(i, 0);
    zr(2 * i + 1) = std::conj(y_processed(i, 1));
    zs(2 * i) = y_processed(i, 2) / e;
    zs(2 * i + 1) = e * std::conj(y_processed(i, 3));
  }
  return {std::move(zr), std::move(zs)};
}

CVec p_r_of_symbols(const CVec& x) {
  CVec p(3);
  p << cxd{x(0).real(), x(2).imag()}, cxd{x(1).real(), x(3).imag()},
      cxd{x(5).real(), x(4).imag()};
  return p;
}

CVec p_s_of_symbols(const CVec& x) {
  CVec p(3);
  p << cxd{x(4).real(), x(5).imag()}, cxd{x(2).real(), x(0).imag()},
      cxd{x(3).real(), x(1).imag()};
  return p;
}

CVec symbols_of_p(const CVec& p_r, const CVec& p_s) {
  CVec x(6);
  x(0) = {p_r(0).real(), p_s(1).imag()};
  x(1) = {p_r(1).real(), p_s(2).imag()};
  x(2) = {p_s(1).real(), p_r(0).imag()};
  x(3) = {p_s(2).real(), p_r(1).imag()};
  x(4) = {p_s(0).real(), p_r(2).imag()};
  x(5) = {p_r(2).real(), p_s(0).imag()};
  return x;
}

CVec ljj2_y_double_prime(const CMat& y) {
  if (y.rows() != 2 || y.cols() != 3)
    throw DimensionMismatch("ljj2_y_double_prime: expected 2x3");
  CVec z(6);
  z << y(0, 0), std::conj(y(0, 1)), y(0, 2), y(1, 0), std::conj(y(1, 1)), y(1, 2);
  return z;
}

RMat ljj2_zero_forcer() {
  RMat f = RMat::Zero(4, 6);
  f(0, 0) = 1.0;
  f(1, 1) = 1.0;
  f(1, 5) = -1.0;
  f(2, 3) = 1.0;
  f(3, 2) = 1.0;
  f(3, 4) = 1.0;
  return f;
}

CMat build_effective_r2(const CMat& hhat, const CMat& ghat) {
  CMat r(4, 4);
  for (int i = 0; i < 2; ++i) {
    const auto h = hhat.row(i), g = ghat.row(i);
    r.row(2 * i) << h(0), h(1), g(0), g(1);
    r.row(2 * i + 1) << std::conj(h(1)), -std::conj(h(0)), std::conj(g(1)), -std::conj(g(0));
  }
  return r;
}

CVec ljj2_rx2_observations(const CMat& y) {
  if (y.rows() != 2 || y.cols() != 3)
    throw DimensionMismatch("ljj2_rx2_observations: expected 2x3");
  // interferers occupy slots 1,2 with the Alamouti maps; clean slot 2, keep slot 3
  CVec z(4);
  const cxd c0 = y(0, 1) + std::conj(y(1, 0));   // alpha_2 = +1, perm^{-1}(1) = 2
  const cxd c1 = y(1, 1) - std::conj(y(0, 0));   // alpha_1 = -1, perm^{-1}(2) = 1
  z << c0, std::conj(y(0, 2)), c1, std::conj(y(1, 2));
  return z;
}

CMat extend3(const CMat& h) {
  CMat out = CMat::Zero(3 * h.rows(), 3 * h.cols());
  for (int k = 0; k < 3; ++k)
    out.block(k * h.rows(), k * h.cols(), h.rows(), h.cols()) = h;
  return out;
}

JsPrecoders js3_precoders(const ChannelRealization& ch) {
  if (ch.m != 3) throw DimensionMismatch("js3_precoders: need 3 antennas");
  CMat h11 = extend3(ch(0, 0)), h12 = extend3(ch(0, 1));
  CMat h21 = extend3(ch(1, 0)), h22 = extend3(ch(1, 1));
  CMat fprime;
  try {
    fprime = inverse(h11) * h21 * inverse(h22) * h12;
  } catch (const SingularMatrix&) {
    throw ChannelDegenerate("js3_precoders: singular channel matrix");
  }
  EigResult eig = eig_general(fprime);
  CMat basis = eig.vectors;
  // reproducible eigenvector convention: first entry above threshold made real positive
  for (Eigen::Index c = 0; c < basis.cols(); ++c) {
    for (Eigen::Index r = 0; r < basis.rows(); ++r) {
      const cxd v = basis(r, c);
      if (std::abs(v) > 1e-8) {
        basis.col(c) *= std::conj(v) / std::abs(v);
        break;
      }
    }
  }
  CMat ones_top(3, 1), ones_bot(3, 1);
  ones_top << 1.0, 1.0, 0.0;
  ones_bot << 1.0, 0.0, 1.0;
  JsPrecoders v;
  v.v11 = basis * kron(CMat::Identity(3, 3), ones_top);
  v.v12 = basis * kron(CMat::Identity(3, 3), ones_bot);
  try {
    v.v21 = inverse(h22) * h12 * v.v11;
    v.v22 = inverse(h21) * h11 * v.v12;
  } catch (const SingularMatrix&) {
    throw ChannelDegenerate("js3_precoders: singular channel matrix");
  }
  return v;
}

CVec js3_transmit(const JsPrecoders& v, int tx, const CVec& sym_to_rx1, const CVec& sym_to_rx2) {
  const CMat& va = tx == 0 ? v.v11 : v.v21;
  const CMat& vb = tx == 0 ? v.v12 : v.v22;
  return std::sqrt(1.5) * (va * sym_to_rx1 / va.norm() + vb * sym_to_rx2 / vb.norm());
}

}  // namespace xnet
