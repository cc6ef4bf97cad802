#pragma once

#include <utility>

#include "xnet/channel.hpp"
#include "xnet/stbc.hpp"

namespace xnet {

/// Each transmitter splits power equally over its two codewords; with the
/// zero-column interleaving this meets E[tr(X X^H)] <= T with equality.
inline constexpr double kLjjPowerShare = 0.75;

/// Channel-inverting precoders, one per (tx, destination), each normalized to
/// unit Frobenius norm: V_11 = H_12^{-1}/sqrt(tr(H_12^{-1} H_12^{-H})), etc.
/// A transmitter only needs its own outgoing channels.
struct Precoders {
  CMat v11, v12, v21, v22;  // v_ij: used by Tx-i for the message to Rx-j
};

Precoders ljj_precoders(const ChannelRealization& ch);

/// X_i = sqrt(share) * (V_i1 * interleave(X'_i1, rx1) + V_i2 * interleave(X'_i2, rx2)).
/// The harness applies sqrt(P) and the channel.
std::pair<CMat, CMat> ljj_transmit(const Precoders& v, const CMat& x11p, const CMat& x12p,
                                   const CMat& x21p, const CMat& x22p, double share = kLjjPowerShare);

/// Interference cancellation at Rx-1: odd destination slots are clean; even
/// slots are cleaned with the code's conjugate maps applied to the trailing
/// pure-interference slot.  Output is M x T' over the desired codeword columns.
CMat receive_cancel_rx1(const CMat& y, const LinearDispersionCode& code);

/// Mirrored cleaning at Rx-2 via the inverse conjugate maps applied to the
/// leading pure-interference slot (see docs/rx2-cancellation.md).
CMat receive_cancel_rx2(const CMat& y, const LinearDispersionCode& code);

/// Post-cancellation complex noise variance per desired codeword column
/// (1 for slots observed directly, 1 + sigma^2 for cleaned slots).
std::array<double, 4> cancel_noise_variance(const LinearDispersionCode& code, RxSide side);

// --- effective symbol-by-symbol systems for the 3-antenna scheme ---

/// 6x6 map from (p1,p2,p3) per transmitter to the vectorized first two
/// processed columns (y'_i1, conj(y'_i2)).
CMat build_effective_r(const CMat& hhat, const CMat& ghat, double theta);

/// 6x6 map from (p4,p5,p6) per transmitter to the vectorized last two
/// processed columns (e^{-j theta} y'_i3, e^{+j theta} conj(y'_i4)).
CMat build_effective_s(const CMat& hhat, const CMat& ghat, double theta);

/// R and S for a sampled channel at Rx-1, with hhat = H_11 V_11, ghat = H_21 V_21.
std::pair<CMat, CMat> ljj3_effective_matrices(const ChannelRealization& ch, double theta);

/// Observation vectors feeding the R- and S-systems, from the processed 3x4 output.
std::pair<CVec, CVec> vectorize_processed(const CMat& y_processed, double theta);

/// p-symbol packing for one transmitter's 6 source symbols.
CVec p_r_of_symbols(const CVec& x);                    // (p1, p2, p3)
CVec p_s_of_symbols(const CVec& x);                    // (p4, p5, p6)
CVec symbols_of_p(const CVec& p_r, const CVec& p_s);   // inverse of the pair above

// --- 2-antenna scheme ---

/// Stacked processed observations (y_11, conj(y_12), y_13, y_21, conj(y_22), y_23).
CVec ljj2_y_double_prime(const CMat& y);

/// 4x6 zero-forcer removing the two aligned interference dimensions; rows
/// ordered so that F * Y'' = sqrt(share * P) * R2 * x exactly.
RMat ljj2_zero_forcer();

/// 4x4 effective matrix of the zero-forced 2-antenna system.
CMat build_effective_r2(const CMat& hhat, const CMat& ghat);

/// Mirrored Rx-2 observations for the 2-antenna scheme, after cleaning the
/// contaminated column with the inverse maps: (y'_11, conj(y'_12), y'_21, conj(y'_22)).
CVec ljj2_rx2_observations(const CMat& y);

// --- interference-alignment scheme on the 3-symbol extension ---

/// Block-diagonal 3-symbol extension of an m x m channel.
CMat extend3(const CMat& h);

/// Raw (unnormalized) 9x3 precoders: v11/v12 from the eigenbasis of
/// F' = H'11^{-1} H'21 H'22^{-1} H'12, v21/v22 chosen so the alignment
/// identities H'22 v21 = H'12 v11 and H'21 v22 = H'11 v12 hold exactly.
/// Eigenbasis columns are unit norm with first nonzero entry real positive.
struct JsPrecoders {
  CMat v11, v12, v21, v22;
};

JsPrecoders js3_precoders(const ChannelRealization& ch);

/// Per-extension transmit vector x_i = sqrt(3/2) (v_i1 X_i1 + v_i2 X_i2)/norms;
/// symbols enter as 3-vectors per message.
CVec js3_transmit(const JsPrecoders& v, int tx, const CVec& sym_to_rx1, const CVec& sym_to_rx2);

}  // namespace xnet
