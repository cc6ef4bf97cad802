#pragma once

#include <string>
#include <vector>

#include "xnet/numerics.hpp"

namespace xnet {

/// One conjugate-linear cancellation map per row of an odd column pair:
/// column p is annihilated by alpha[r] * conj( X'(perm[r], p+1) ), i.e.
/// X'(r, p) + alpha[r] * conj(X'(perm[r], p+1)) == 0 for every symbol value.
struct CancelMap {
  std::vector<int> perm;   // size m, 0-based row permutation
  std::vector<cxd> alpha;  // size m, unit modulus for the built-in codes
};

/// Linear dispersion STBC: X' = sum_k A_re[k] Re(x_k) + A_im[k] Im(x_k),
/// with the column-cancellation metadata carried as data so one receiver
/// routine serves every code that has the property.
struct LinearDispersionCode {
  std::string name;
  double theta = 0.0;  // rotation baked into the dispersion matrices
  int m = 0;           // antennas (rows)
  int t_prime = 0;     // columns, even
  int l = 0;           // complex symbols
  std::vector<CMat> a_re, a_im;   // l dispersion matrices each, m x t'
  std::vector<CancelMap> cancel;  // one per odd column pair, t'/2 entries
  std::vector<double> sigma_sq;   // |alpha|^2 per map, (pair, row) order
};

struct Codeword {
  std::string code_name;
  CVec symbols;
  CMat matrix;
};

/// 3-antenna rate-3/2 code on 4 slots (6 complex symbols).
LinearDispersionCode proposed_3tx_code(double theta);
/// 4-antenna code on 4 slots (8 complex symbols).
LinearDispersionCode sr_4tx_code(double theta);
/// 2x2 orthogonal design.
LinearDispersionCode alamouti_code();

CMat encode(const LinearDispersionCode& code, const CVec& symbols);
void encode_into(const LinearDispersionCode& code, const CVec& symbols, CMat& out);
Codeword make_codeword(const LinearDispersionCode& code, const CVec& symbols);

struct CancellationVerdict {
  bool pass = true;
  // first violation, when pass == false
  int dispersion_index = -1;
  int column = -1;  // odd column p, 0-based
  int row = -1;
  double residual = 0.0;
};

/// Checks the cancellation identity on every dispersion matrix (i.e.
/// symbolically, for all symbol values), tolerance 1e-12.
CancellationVerdict verify_column_cancellation(const LinearDispersionCode& code);

enum class RxSide { rx1, rx2 };

/// M x 3T'/2 matrix with a zero column after every two codeword columns.
/// rx1: zeros at slots 3, 6, ...; rx2: zeros at slots 1, 4, ... (1-based).
CMat interleave_zero_columns(const CMat& x_prime, RxSide dest);

CMat difference_matrix(const Codeword& c1, const Codeword& c2);

}  // namespace xnet
