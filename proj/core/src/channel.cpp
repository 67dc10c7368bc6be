#include "mimoid/channel.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "mimoid/fft.hpp"

namespace mimoid {
namespace {

bool full_column_rank(const ComplexMatrix& h) {
    Eigen::JacobiSVD<ComplexMatrix> svd(h);
    const auto& s = svd.singularValues();
    if (s.size() == 0) return false;
    return s(s.size() - 1) > 1e-12 * std::max(1.0, s(0));
}

cplx rotor(double delta_f, double n) {
    const double ph = 2.0 * std::numbers::pi * delta_f * n;
    return {std::cos(ph), std::sin(ph)};
}

}  // namespace

FlatChannel FlatChannel::random(int n_r, int n_t, RandomSource& rng) {
    if (n_r <= 0 || n_t <= 0) throw ArgumentError("FlatChannel::random: dimensions must be positive");
    for (;;) {
        FlatChannel ch{rng.complex_gaussian_matrix(n_r, n_t)};
        if (n_r < n_t || full_column_rank(ch.H)) return ch;
    }
}

std::vector<double> SelectiveChannel::exponential_pdp(int n_taps) {
    std::vector<double> p(static_cast<std::size_t>(n_taps));
    double total = 0.0;
    for (int t = 0; t < n_taps; ++t) total += p[static_cast<std::size_t>(t)] = std::exp(-t / 5.0);
    for (auto& v : p) v /= total;
    return p;
}

SelectiveChannel SelectiveChannel::random(int n_r, int n_t, RandomSource& rng, int n_taps) {
    if (n_r <= 0 || n_t <= 0 || n_taps <= 0)
        throw ArgumentError("SelectiveChannel::random: dimensions must be positive");
    SelectiveChannel ch;
    ch.pdp = exponential_pdp(n_taps);
    for (double p : ch.pdp) ch.taps.push_back(rng.complex_gaussian_matrix(n_r, n_t, p));
    return ch;
}

ComplexMatrix SelectiveChannel::frequency_response(int k, int n) const {
    ComplexMatrix h = ComplexMatrix::Zero(taps.front().rows(), taps.front().cols());
    for (std::size_t t = 0; t < taps.size(); ++t)
        h += taps[t] * rotor(-static_cast<double>(k) / n, static_cast<double>(t));
    return h;
}

void ImpairmentSpec::validate() const {
    if (!(zeta >= 0.0 && zeta < 1.0)) throw ArgumentError("timing offset zeta must lie in [0, 1)");
    if (!std::isfinite(delta_f)) throw ArgumentError("frequency offset must be finite");
    if (!(f_d >= 0.0) || !std::isfinite(f_d)) throw ArgumentError("Doppler f_d must be finite and >= 0");
    if (const auto* m = std::get_if<MixtureNoise>(&noise)) {
        if (!(m->epsilon >= 0.0 && m->epsilon <= 1.0)) throw ArgumentError("mixture epsilon must lie in [0, 1]");
        if (!(m->eta > 1.0)) throw ArgumentError("mixture eta must exceed 1");
    }
}

double noise_variance(double snr_db) {
    if (std::isinf(snr_db) && snr_db > 0) return 0.0;
    return std::pow(10.0, -snr_db / 10.0);
}

void add_noise(ComplexMatrix& y, const ImpairmentSpec& imp, double sigma2, RandomSource& rng) {
    if (sigma2 <= 0.0) return;
    const auto* mix = std::get_if<MixtureNoise>(&imp.noise);
    for (Eigen::Index c = 0; c < y.cols(); ++c) {
        for (Eigen::Index r = 0; r < y.rows(); ++r) {
            double var = sigma2;
            if (mix && mix->epsilon > 0.0 && rng.uniform() < mix->epsilon) var *= mix->eta;
            y(r, c) += rng.complex_normal(var);
        }
    }
}

DopplerProcess::DopplerProcess(const ComplexMatrix& h0, double f_d, RandomSource& rng) : h0_(h0), f_d_(f_d) {
    if (!(f_d >= 0.0)) throw ArgumentError("DopplerProcess: f_d must be >= 0");
    if (f_d == 0.0) return;
    const int m = kSinusoids;
    const Eigen::Index rows = h0.rows();
    const Eigen::Index cols = h0.cols();
    amp_.assign(static_cast<std::size_t>(m), ComplexMatrix(rows, cols));
    freq_.assign(static_cast<std::size_t>(m), RealMatrix(rows, cols));
    for (Eigen::Index c = 0; c < cols; ++c) {
        for (Eigen::Index r = 0; r < rows; ++r) {
            cplx sum = 0.0;
            for (int i = 0; i < m; ++i) {
                const cplx a = rng.complex_normal(1.0);
                amp_[static_cast<std::size_t>(i)](r, c) = a;
                sum += a;
                freq_[static_cast<std::size_t>(i)](r, c) = f_d * std::cos(rng.uniform(0.0, 2.0 * std::numbers::pi));
            }
            // Shift the amplitudes so that the process passes through H0 at n = 0.
            const cplx shift = (std::sqrt(static_cast<double>(m)) * h0(r, c) - sum) / static_cast<double>(m);
            for (int i = 0; i < m; ++i) amp_[static_cast<std::size_t>(i)](r, c) += shift;
        }
    }
}

ComplexMatrix DopplerProcess::at(double n) const {
    if (f_d_ == 0.0) return h0_;
    ComplexMatrix h = ComplexMatrix::Zero(h0_.rows(), h0_.cols());
    for (std::size_t i = 0; i < amp_.size(); ++i)
        for (Eigen::Index c = 0; c < h.cols(); ++c)
            for (Eigen::Index r = 0; r < h.rows(); ++r) h(r, c) += amp_[i](r, c) * rotor(freq_[i](r, c), n);
    return h / std::sqrt(static_cast<double>(amp_.size()));
}

FlatChannel doppler_evolve(const FlatChannel& h0, double f_d, double n, RandomSource& rng) {
    return FlatChannel{DopplerProcess(h0.H, f_d, rng).at(n)};
}

ComplexMatrix apply_flat(const FlatChannel& h, const ComplexMatrix& tx, const ImpairmentSpec& imp, double snr_db,
                         RandomSource& rng) {
    imp.validate();
    if (tx.cols() < 1) throw ArgumentError("apply_flat: empty transmit block");
    if (tx.rows() != h.H.cols())
        throw ArgumentError("apply_flat: channel has " + std::to_string(h.H.cols()) + " inputs, signal has " +
                            std::to_string(tx.rows()) + " antennas");

    ComplexMatrix s = tx;
    if (imp.zeta > 0.0) {
        s = (1.0 - imp.zeta) * tx;
        s.rightCols(tx.cols() - 1) += imp.zeta * tx.leftCols(tx.cols() - 1);
    }

    ComplexMatrix y;
    if (imp.f_d > 0.0) {
        const DopplerProcess proc(h.H, imp.f_d, rng);
        y.resize(h.H.rows(), s.cols());
        for (Eigen::Index n = 0; n < s.cols(); ++n) y.col(n) = proc.at(static_cast<double>(n)) * s.col(n);
    } else {
        y = h.H * s;
    }
    if (imp.delta_f != 0.0)
        for (Eigen::Index n = 0; n < y.cols(); ++n) y.col(n) *= rotor(imp.delta_f, static_cast<double>(n));
    add_noise(y, imp, noise_variance(snr_db), rng);
    return y;
}

int OfdmObservation::n_symbols() const {
    return subcarriers.empty() ? 0 : static_cast<int>(subcarriers.front().cols());
}

int OfdmObservation::n_r() const { return subcarriers.empty() ? 0 : static_cast<int>(subcarriers.front().rows()); }

ComplexMatrix OfdmObservation::symbol(int n) const {
    ComplexMatrix out(n_r(), n_subcarriers());
    for (int k = 0; k < n_subcarriers(); ++k) out.col(k) = subcarriers[static_cast<std::size_t>(k)].col(n);
    return out;
}

OfdmObservation ofdm_demodulate(const ComplexMatrix& r, const OfdmParams& params) {
    const int n = params.subcarriers;
    const int cp = params.cp_len;
    const int nb = params.symbols;
    const int sym_len = n + cp;
    if (n <= 0 || nb <= 0 || cp < 0) throw ArgumentError("ofdm_demodulate: invalid OFDM parameters");
    if (r.cols() != static_cast<Eigen::Index>(nb) * sym_len)
        throw ArgumentError("ofdm_demodulate: " + std::to_string(r.cols()) + " samples, expected " +
                            std::to_string(static_cast<long long>(nb) * sym_len));
    const Eigen::Index n_r = r.rows();
    OfdmObservation obs;
    obs.subcarriers.assign(static_cast<std::size_t>(n), ComplexMatrix(n_r, nb));
    std::vector<cplx> buf(static_cast<std::size_t>(n));
    for (int sym = 0; sym < nb; ++sym) {
        const Eigen::Index base = static_cast<Eigen::Index>(sym) * sym_len + cp;
        for (Eigen::Index a = 0; a < n_r; ++a) {
            for (int i = 0; i < n; ++i) buf[static_cast<std::size_t>(i)] = r(a, base + i);
            fft::forward(buf);
            for (int k = 0; k < n; ++k)
                obs.subcarriers[static_cast<std::size_t>(k)](a, sym) = buf[static_cast<std::size_t>(k)];
        }
    }
    return obs;
}

ComplexMatrix apply_selective(const SelectiveChannel& ch, const TxFrame& frame, const ImpairmentSpec& imp,
                              double snr_db, RandomSource& rng) {
    imp.validate();
    if (frame.variant == SystemVariant::SingleCarrier)
        throw ArgumentError("apply_selective_ofdm: frame is not OFDM");
    if (ch.taps.empty()) throw ArgumentError("apply_selective_ofdm: channel has no taps");
    const ComplexMatrix& tx = frame.samples;
    if (tx.rows() != ch.taps.front().cols()) throw ArgumentError("apply_selective_ofdm: antenna count mismatch");
    const int n = frame.ofdm.subcarriers;
    const int cp = frame.ofdm.cp_len;
    const int nb = frame.ofdm.symbols;
    const int sym_len = n + cp;
    if (tx.cols() != static_cast<Eigen::Index>(nb) * sym_len)
        throw ArgumentError("apply_selective_ofdm: frame length does not match its OFDM parameters");
    if (nb == 0) throw ArgumentError("apply_selective_ofdm: N_b = 0");

    ComplexMatrix s = tx;
    if (imp.zeta > 0.0) {
        s = (1.0 - imp.zeta) * tx;
        s.rightCols(tx.cols() - 1) += imp.zeta * tx.leftCols(tx.cols() - 1);
    }

    const Eigen::Index n_r = ch.taps.front().rows();
    const int n_taps = static_cast<int>(ch.taps.size());
    std::vector<DopplerProcess> procs;
    if (imp.f_d > 0.0)
        for (const auto& t : ch.taps) procs.emplace_back(t, imp.f_d, rng);

    // Time-domain convolution; with Doppler the taps are held per OFDM symbol.
    ComplexMatrix r = ComplexMatrix::Zero(n_r, s.cols());
    std::vector<ComplexMatrix> taps = ch.taps;
    for (int sym = 0; sym < nb; ++sym) {
        const Eigen::Index base = static_cast<Eigen::Index>(sym) * sym_len;
        if (!procs.empty())
            for (std::size_t d = 0; d < taps.size(); ++d) taps[d] = procs[d].at(static_cast<double>(base));
        for (int d = 0; d < n_taps; ++d) {
            const Eigen::Index lo = std::max<Eigen::Index>(base, d);
            const Eigen::Index cnt = base + sym_len - lo;
            if (cnt > 0) r.middleCols(lo, cnt).noalias() += taps[static_cast<std::size_t>(d)] * s.middleCols(lo - d, cnt);
        }
    }
    if (imp.delta_f != 0.0)
        for (Eigen::Index t = 0; t < r.cols(); ++t) r.col(t) *= rotor(imp.delta_f, static_cast<double>(t));
    add_noise(r, imp, noise_variance(snr_db), rng);

    return r;
}

int channel_memory(const SelectiveChannel& ch, const ImpairmentSpec& imp) {
    return static_cast<int>(ch.taps.size()) - 1 + (imp.zeta > 0.0 ? 1 : 0);
}

OfdmObservation apply_selective_ofdm(const SelectiveChannel& ch, const TxFrame& frame, const ImpairmentSpec& imp,
                                     double snr_db, RandomSource& rng) {
    OfdmObservation obs = ofdm_demodulate(apply_selective(ch, frame, imp, snr_db, rng), frame.ofdm);
    obs.cp_too_short = frame.ofdm.cp_len < channel_memory(ch, imp);
    return obs;
}

}  // namespace mimoid
