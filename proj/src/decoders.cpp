#include "xnet/decoders.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/QR>

namespace xnet {

namespace {

void lift_column(RMat& gen, Eigen::Index row0, Eigen::Index col, const CVec& src, bool imag_axis) {
  // real lift of src (imag_axis: of j*src) into rows row0..row0+2n-1, interleaved re/im
  for (Eigen::Index r = 0; r < src.size(); ++r) {
    const cxd v = imag_axis ? cxd(0.0, 1.0) * src(r) : src(r);
    gen(row0 + 2 * r, col) = v.real();
    gen(row0 + 2 * r + 1, col) = v.imag();
  }
}

void whiten_rows(RealLinearModel& m, Eigen::Index row0, std::span<const double> row_var) {
  for (std::size_t r = 0; r < row_var.size(); ++r) {
    const double w = 1.0 / std::sqrt(row_var[r] / 2.0);
    m.observation(row0 + 2 * r) *= w;
    m.observation(row0 + 2 * r + 1) *= w;
    m.generator.row(row0 + 2 * r) *= w;
    m.generator.row(row0 + 2 * r + 1) *= w;
  }
}

}  // namespace

RealLinearModel build_complex_model(const CMat& gen, const CVec& obs,
                                    std::span<const Alphabet> slots,
                                    std::span<const double> row_var) {
  if (gen.rows() != obs.size() || static_cast<std::size_t>(gen.rows()) != row_var.size() ||
      static_cast<std::size_t>(gen.cols()) != slots.size())
    throw DimensionMismatch("build_complex_model: inconsistent dimensions");
  RealLinearModel m;
  m.symbol_slots.assign(slots.begin(), slots.end());
  m.observation.resize(2 * obs.size());
  for (Eigen::Index r = 0; r < obs.size(); ++r) {
    m.observation(2 * r) = obs(r).real();
    m.observation(2 * r + 1) = obs(r).imag();
  }
  m.generator.setZero(2 * gen.rows(), 2 * gen.cols());
  for (Eigen::Index c = 0; c < gen.cols(); ++c) {
    lift_column(m.generator, 0, 2 * c, gen.col(c), false);
    lift_column(m.generator, 0, 2 * c + 1, gen.col(c), true);
  }
  whiten_rows(m, 0, row_var);
  return m;
}

RealLinearModel build_real_model(const CMat& r, const CMat& s, const Constellation& c,
                                 double scale, const CVec& z_r, const CVec& z_s,
                                 std::span<const double, 6> var_r,
                                 std::span<const double, 6> var_s) {
  if (r.rows() != 6 || r.cols() != 6 || s.rows() != 6 || s.cols() != 6 ||
      z_r.size() != 6 || z_s.size() != 6)
    throw DimensionMismatch("build_real_model: expected 6x6 systems");
  RealLinearModel m;
  m.symbol_slots.assign(12, alphabet_of(c));
  m.observation.resize(24);
  for (Eigen::Index i = 0; i < 6; ++i) {
    m.observation(2 * i) = z_r(i).real();
    m.observation(2 * i + 1) = z_r(i).imag();
    m.observation(12 + 2 * i) = z_s(i).real();
    m.observation(12 + 2 * i + 1) = z_s(i).imag();
  }
  m.generator.setZero(24, 24);
  // which effective column carries each real component of source symbol k:
  // {in_s_system, column offset within the tx block, lifted through j}
  struct Slot { bool in_s; int col; bool imag_axis; };
  static constexpr Slot kRe[6] = {{false, 0, false}, {false, 1, false}, {true, 1, false},
                                  {true, 2, false},  {true, 0, false},  {false, 2, false}};
  static constexpr Slot kIm[6] = {{true, 1, true},  {true, 2, true},  {false, 0, true},
                                  {false, 1, true}, {false, 2, true}, {true, 0, true}};
  for (int tx = 0; tx < 2; ++tx)
    for (int k = 0; k < 6; ++k) {
      const int sym = 6 * tx + k;
      const auto place = [&](const Slot& sl, Eigen::Index col) {
        const CMat& sys = sl.in_s ? s : r;
        lift_column(m.generator, sl.in_s ? 12 : 0, col,
                    (scale * sys.col(3 * tx + sl.col)).eval(), sl.imag_axis);
      };
      place(kRe[k], 2 * sym);
      place(kIm[k], 2 * sym + 1);
    }
  whiten_rows(m, 0, std::span<const double>(var_r.data(), 6));
  whiten_rows(m, 12, std::span<const double>(var_s.data(), 6));
  return m;
}

std::pair<CVec, CVec> zf_decode(const CMat& r, const CMat& s, const CVec& z_r,
                                const CVec& z_s, double scale) {
  if (numeric_rank(r) < r.cols() || numeric_rank(s) < s.cols())
    throw ChannelDegenerate("zf_decode: effective matrix below rank tolerance");
  const CVec p_r = r.partialPivLu().solve(z_r) / scale;
  const CVec p_s = s.partialPivLu().solve(z_s) / scale;
  CVec x1 = symbols_of_p(p_r.head(3), p_s.head(3));
  CVec x2 = symbols_of_p(p_r.tail(3), p_s.tail(3));
  return {std::move(x1), std::move(x2)};
}

namespace {

struct Prepared {
  RMat r;        // upper triangular, 2n x 2n
  RVec ytil;     // head of Q^T y
  double offset; // squared norm of the component of y outside the column space
  const std::vector<Alphabet>* slots;
};

Prepared prepare(const RealLinearModel& model) {
  const Eigen::Index rows = model.generator.rows();
  const Eigen::Index cols = model.generator.cols();
  if (rows < cols || model.observation.size() != rows)
    throw DimensionMismatch("decoder: generator/observation shape mismatch");
  if (cols != 2 * static_cast<Eigen::Index>(model.symbol_slots.size()))
    throw DimensionMismatch("decoder: slot count mismatch");
  Eigen::HouseholderQR<RMat> qr(model.generator);
  RMat rfull = qr.matrixQR().triangularView<Eigen::Upper>();
  Prepared p;
  p.r = rfull.topRows(cols);
  double dmax = 0.0;
  for (Eigen::Index i = 0; i < cols; ++i) dmax = std::max(dmax, std::abs(p.r(i, i)));
  for (Eigen::Index i = 0; i < cols; ++i)
    if (std::abs(p.r(i, i)) <= 1e-10 * dmax)
      throw RankDeficientGenerator("decoder: generator not full column rank");
  RVec qty = qr.householderQ().transpose() * model.observation;
  p.ytil = qty.head(cols);
  p.offset = qty.tail(rows - cols).squaredNorm();
  p.slots = &model.symbol_slots;
  return p;
}

// Increment contributed by level k (rows 2k, 2k+1) for a candidate point.
// Both decoders and the final metric go through this one expression so that
// equal decisions carry bitwise-equal metrics.
inline double level_increment(const RMat& r, const RVec& res, int k, cxd pt) {
  const double a = pt.real(), b = pt.imag();
  const double e0 = res(2 * k) - r(2 * k, 2 * k) * a - r(2 * k, 2 * k + 1) * b;
  const double e1 = res(2 * k + 1) - r(2 * k + 1, 2 * k + 1) * b;
  return e0 * e0 + e1 * e1;
}

inline void apply_choice(const RMat& r, RVec& res, int k, cxd pt) {
  if (k == 0) return;
  res.head(2 * k) -= r.col(2 * k).head(2 * k) * pt.real() + r.col(2 * k + 1).head(2 * k) * pt.imag();
}

bool lex_less(std::span<const int> a, std::span<const int> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

double metric_of(const Prepared& p, std::span<const int> tuple, RVec& res) {
  const int n = static_cast<int>(p.slots->size());
  res = p.ytil;
  double total = 0.0;
  for (int k = n - 1; k >= 0; --k) {
    const cxd pt = (*p.slots)[k].pts[tuple[k]];
    total += level_increment(p.r, res, k, pt);
    apply_choice(p.r, res, k, pt);
  }
  return total;
}

}  // namespace

Decision ml_enumerate(const RealLinearModel& model) {
  Prepared p = prepare(model);
  const int n = static_cast<int>(model.symbol_slots.size());
  std::uint64_t space = 1;
  for (const auto& s : model.symbol_slots) {
    space *= static_cast<std::uint64_t>(s.n);
    if (space > (1u << 20)) throw SearchSpaceTooLarge("ml_enumerate: over 2^20 hypotheses");
  }
  std::vector<int> tuple(n, 0);
  Decision best;
  best.metric = std::numeric_limits<double>::infinity();
  RVec res(2 * n);
  while (true) {
    const double m = metric_of(p, tuple, res);
    if (m < best.metric) {  // lexicographic iteration: first minimum is the tie-break winner
      best.metric = m;
      best.point_index = tuple;
    }
    int k = n - 1;
    while (k >= 0 && ++tuple[k] == model.symbol_slots[k].n) tuple[k--] = 0;
    if (k < 0) break;
  }
  best.metric += p.offset;
  return best;
}

Decision sphere_decode(const RealLinearModel& model) {
  Prepared p = prepare(model);
  const int n = static_cast<int>(model.symbol_slots.size());

  std::vector<RVec> res(n + 1);
  std::vector<double> acc(n + 1, 0.0);
  std::vector<std::vector<std::pair<double, int>>> cand(n);
  std::vector<int> pos(n, 0), cur(n, 0);
  res[n] = p.ytil;

  auto enter = [&](int k) {
    auto& list = cand[k];
    const Alphabet& slot = (*p.slots)[k];
    list.resize(slot.n);
    for (int i = 0; i < slot.n; ++i)
      list[i] = {level_increment(p.r, res[k + 1], k, slot.pts[i]), i};
    std::sort(list.begin(), list.end());
    pos[k] = 0;
  };

  Decision best;
  best.metric = std::numeric_limits<double>::infinity();
  std::vector<int> leaf(n);

  int k = n - 1;
  enter(k);
  while (true) {
    if (pos[k] >= static_cast<int>(cand[k].size())) {
      if (++k == n) break;  // exhausted the root level
      ++pos[k];
      continue;
    }
    const auto [inc, idx] = cand[k][pos[k]];
    const double partial = acc[k + 1] + inc;
    if (partial > best.metric) {  // candidates are sorted: the rest only grow
      if (++k == n) break;
      ++pos[k];
      continue;
    }
    if (k == 0) {
      leaf[0] = idx;
      for (int i = 1; i < n; ++i) leaf[i] = cur[i];
      if (partial < best.metric ||
          (partial == best.metric && lex_less(leaf, best.point_index))) {
        best.metric = partial;
        best.point_index = leaf;
      }
      ++pos[k];
      continue;
    }
    cur[k] = idx;
    acc[k] = partial;
    res[k] = res[k + 1];
    apply_choice(p.r, res[k], k, (*p.slots)[k].pts[idx]);
    --k;
    enter(k);
  }
  if (best.point_index.empty())
    throw RankDeficientGenerator("sphere_decode: search found no candidate");
  best.metric += p.offset;
  return best;
}

}  // namespace xnet
