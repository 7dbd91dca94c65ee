#include "gftse/enhance.hpp"

#include <cmath>
#include <cstdio>
#include <span>
#include <thread>

#include <json.hpp>

#include "gftse/errors.hpp"
#include "gftse/rng.hpp"
#include "gftse/sisdr.hpp"
#include "gftse/training.hpp"

namespace gftse {

namespace {

constexpr double kMaskEps = 1e-8;
constexpr double kSegSnrLo = -10.0;
constexpr double kSegSnrHi = 35.0;
constexpr double kSegSnrWindowSeconds = 0.032;

double clamp(double v, double lo, double hi) { return v < lo ? lo : (v > hi ? hi : v); }

double segment_snr(std::span<const double> clean, std::span<const double> err) {
  double num = 0.0, den = 0.0;
  for (double v : clean) num += v * v;
  for (double v : err) den += v * v;
  num = std::max(num, kSiSdrEps);
  den = std::max(den, kSiSdrEps);
  return clamp(10.0 * std::log10(num / den), kSegSnrLo, kSegSnrHi);
}

double segmental_snr(std::span<const double> enhanced, std::span<const double> clean,
                     double sample_rate) {
  const std::size_t n = clean.size();
  std::vector<double> err(n);
  for (std::size_t i = 0; i < n; ++i) err[i] = enhanced[i] - clean[i];

  std::size_t seg = static_cast<std::size_t>(std::lround(kSegSnrWindowSeconds * sample_rate));
  if (seg == 0 || seg > n) seg = n;  // degenerate: score the whole signal
  const std::size_t count = n / seg;
  double acc = 0.0;
  for (std::size_t s = 0; s < count; ++s) {
    acc += segment_snr(clean.subspan(s * seg, seg), std::span(err).subspan(s * seg, seg));
  }
  return acc / static_cast<double>(count);
}

MetricsReport metrics_on(std::span<const double> enhanced, std::span<const double> clean,
                         std::span<const double> noisy, double sample_rate) {
  MetricsReport r;
  r.si_sdr_noisy = si_sdr(noisy, clean);
  r.si_sdr_enhanced = si_sdr(enhanced, clean);
  r.si_sdr_improvement = r.si_sdr_enhanced - r.si_sdr_noisy;
  r.seg_snr_enhanced = segmental_snr(enhanced, clean, sample_rate);
  return r;
}

}  // namespace

Mask ideal_graph_mask(const TimeGraphSpectrum& clean, const TimeGraphSpectrum& noisy,
                      double clamp_lo, double clamp_hi) {
  if (clean.basis_id != noisy.basis_id)
    throw BasisMismatch("ideal_graph_mask: spectra from different bases");
  if (clean.data.rows() != noisy.data.rows() || clean.data.cols() != noisy.data.cols())
    throw DimensionMismatch("ideal_graph_mask: spectra shapes differ");
  if (!(clamp_lo < clamp_hi)) throw InvalidArgument("ideal_graph_mask: empty clamp range");

  Mask mask;
  mask.clamp_lo = clamp_lo;
  mask.clamp_hi = clamp_hi;
  mask.data = Matrix(clean.data.rows(), clean.data.cols());
  for (std::size_t f = 0; f < clean.data.rows(); ++f) {
    for (std::size_t k = 0; k < clean.data.cols(); ++k) {
      const double x = noisy.data(f, k);
      const double denom = x + (x < 0.0 ? -kMaskEps : kMaskEps);  // sgn(0) = +1
      mask.data(f, k) = clamp(clean.data(f, k) / denom, clamp_lo, clamp_hi);
    }
  }
  return mask;
}

Mask ideal_magnitude_mask(const ComplexSpectrum& clean, const ComplexSpectrum& noisy,
                          double clamp_lo, double clamp_hi) {
  if (clean.data.rows() != noisy.data.rows() || clean.data.cols() != noisy.data.cols())
    throw DimensionMismatch("ideal_magnitude_mask: spectra shapes differ");
  if (!(clamp_lo < clamp_hi)) throw InvalidArgument("ideal_magnitude_mask: empty clamp range");

  Mask mask;
  mask.clamp_lo = clamp_lo;
  mask.clamp_hi = clamp_hi;
  mask.data = Matrix(clean.data.rows(), clean.data.cols());
  for (std::size_t f = 0; f < clean.data.rows(); ++f)
    for (std::size_t k = 0; k < clean.data.cols(); ++k)
      mask.data(f, k) = clamp(
          std::abs(clean.data(f, k)) / (std::abs(noisy.data(f, k)) + kMaskEps),
          clamp_lo, clamp_hi);
  return mask;
}

TimeGraphSpectrum apply_mask(const Mask& mask, const TimeGraphSpectrum& noisy) {
  if (mask.data.rows() != noisy.data.rows() || mask.data.cols() != noisy.data.cols())
    throw DimensionMismatch("apply_mask: mask shape != spectrum shape");
  TimeGraphSpectrum out;
  out.basis_id = noisy.basis_id;
  out.data = Matrix(noisy.data.rows(), noisy.data.cols());
  for (std::size_t f = 0; f < noisy.data.rows(); ++f)
    for (std::size_t k = 0; k < noisy.data.cols(); ++k)
      out.data(f, k) = mask.data(f, k) * noisy.data(f, k);
  return out;
}

ComplexSpectrum apply_mask(const Mask& mask, const ComplexSpectrum& noisy) {
  if (mask.data.rows() != noisy.data.rows() || mask.data.cols() != noisy.data.cols())
    throw DimensionMismatch("apply_mask: mask shape != spectrum shape");
  ComplexSpectrum out;
  out.data = CMatrix(noisy.data.rows(), noisy.data.cols());
  for (std::size_t f = 0; f < noisy.data.rows(); ++f)
    for (std::size_t k = 0; k < noisy.data.cols(); ++k)
      out.data(f, k) = mask.data(f, k) * noisy.data(f, k);
  return out;
}

std::string MetricsReport::to_json() const {
  nlohmann::json j;
  j["si_sdr_noisy"] = si_sdr_noisy;
  j["si_sdr_enhanced"] = si_sdr_enhanced;
  j["si_sdr_improvement"] = si_sdr_improvement;
  j["seg_snr_enhanced"] = seg_snr_enhanced;
  j["num_frames"] = num_frames;
  return j.dump();
}

MetricsReport evaluate(const AudioBuffer& enhanced, const AudioBuffer& clean,
                       const AudioBuffer& noisy) {
  if (enhanced.size() != clean.size() || noisy.size() != clean.size())
    throw DimensionMismatch("evaluate: signal lengths differ");
  if (enhanced.sample_rate != clean.sample_rate || noisy.sample_rate != clean.sample_rate)
    throw InvalidArgument("evaluate: sample rates differ");
  MetricsReport r = metrics_on(enhanced.samples, clean.samples, noisy.samples,
                               clean.sample_rate);
  std::size_t seg =
      static_cast<std::size_t>(std::lround(kSegSnrWindowSeconds * clean.sample_rate));
  if (seg == 0 || seg > clean.size()) seg = clean.size();
  r.num_frames = seg ? clean.size() / seg : 0;
  return r;
}

std::string transform_name(TransformKind kind) {
  switch (kind) {
    case TransformKind::kStft: return "stft";
    case TransformKind::kGftEvd: return "gft-evd";
    case TransformKind::kGftSvd: return "gft-svd";
    case TransformKind::kGftSvdLearned: return "gft-svd-learned";
  }
  throw InvalidArgument("transform_name: unknown kind");
}

TransformKind parse_transform(const std::string& name) {
  if (name == "stft") return TransformKind::kStft;
  if (name == "gft-evd") return TransformKind::kGftEvd;
  if (name == "gft-svd") return TransformKind::kGftSvd;
  if (name == "gft-svd-learned") return TransformKind::kGftSvdLearned;
  throw InvalidArgument("unknown transform: " + name);
}

std::pair<AudioBuffer, MetricsReport> enhance(const AudioBuffer& noisy,
                                              const AudioBuffer& clean,
                                              const EnhanceOptions& options) {
  if (noisy.size() != clean.size()) throw DimensionMismatch("enhance: signal lengths differ");
  if (noisy.sample_rate != clean.sample_rate)
    throw InvalidArgument("enhance: sample rates differ");

  const std::vector<double> window =
      make_window(options.window, options.frame_len, options.hop);
  const FrameSequence f_noisy =
      frame_signal(noisy, options.frame_len, options.hop, window, options.pad_to);
  const FrameSequence f_clean =
      frame_signal(clean, options.frame_len, options.hop, window, options.pad_to);

  Matrix rows;
  switch (options.transform) {
    case TransformKind::kGftSvd:
    case TransformKind::kGftSvdLearned: {
      if (!options.basis) throw InvalidArgument("enhance: gft-svd requires a basis");
      const TimeGraphSpectrum xg = gft_svd_forward(f_noisy, *options.basis);
      const TimeGraphSpectrum sg = gft_svd_forward(f_clean, *options.basis);
      const Mask mask = ideal_graph_mask(sg, xg, options.mask_lo, options.mask_hi);
      const TimeGraphSpectrum masked = apply_mask(mask, xg);
      if (options.transform == TransformKind::kGftSvdLearned) {
        if (!options.synthesis)
          throw InvalidArgument("enhance: learned synthesis requires an operator");
        rows = learned_inverse_apply(*options.synthesis, masked);
      } else {
        rows = gft_svd_inverse(masked, *options.basis);
      }
      break;
    }
    case TransformKind::kGftEvd: {
      if (!options.evd) throw InvalidArgument("enhance: gft-evd requires an EVD basis");
      const ComplexSpectrum xg = gft_evd_forward(f_noisy, *options.evd);
      const ComplexSpectrum sg = gft_evd_forward(f_clean, *options.evd);
      const Mask mask = ideal_magnitude_mask(sg, xg, options.mask_lo, options.mask_hi);
      rows = real_part(gft_evd_inverse(apply_mask(mask, xg), *options.evd));
      break;
    }
    case TransformKind::kStft: {
      if (!options.fourier) throw InvalidArgument("enhance: stft requires a DFT matrix");
      const ComplexSpectrum xg = stft_forward(f_noisy, *options.fourier);
      const ComplexSpectrum sg = stft_forward(f_clean, *options.fourier);
      const Mask mask = ideal_magnitude_mask(sg, xg, options.mask_lo, options.mask_hi);
      rows = real_part(stft_inverse(apply_mask(mask, xg), *options.fourier));
      break;
    }
  }

  AudioBuffer enhanced = overlap_add(with_frames(f_noisy, std::move(rows)), window);

  const auto [lo, hi] = cola_interior(f_noisy);
  const std::size_t len = hi - lo;
  MetricsReport report =
      metrics_on(std::span(enhanced.samples).subspan(lo, len),
                 std::span(clean.samples).subspan(lo, len),
                 std::span(noisy.samples).subspan(lo, len), clean.sample_rate);
  report.num_frames = f_noisy.num_frames();
  return {std::move(enhanced), std::move(report)};
}

std::vector<Mixture> make_mixture_set(std::uint64_t seed, std::size_t count,
                                      double duration_s, double sample_rate,
                                      double snr_db) {
  Rng params(sub_seed(seed, "mixture-params"));
  std::vector<Mixture> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    SynthParams sp;
    sp.frequency_hz = params.uniform(200.0, 2000.0);
    sp.start_hz = params.uniform(100.0, 800.0);
    sp.end_hz = params.uniform(1000.0, 4000.0);
    const SignalKind kind = (i % 2 == 0) ? SignalKind::kSine : SignalKind::kChirp;

    Mixture mix;
    mix.clean = synth_signal(kind, duration_s, sample_rate, 0, sp);
    const AudioBuffer noise = synth_signal(SignalKind::kWhiteNoise, duration_s, sample_rate,
                                           sub_seed(seed, "noise") + i);
    mix.noisy = mix_at_snr(mix.clean, noise, snr_db).first;
    out.push_back(std::move(mix));
  }
  return out;
}

std::string ReportTable::to_csv() const {
  std::string out = "transform,p,K,si_sdr_noisy,si_sdr_enhanced,improvement,seg_snr\n";
  char buf[192];
  for (const ReportRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%s,%.12g,%zu,%.12g,%.12g,%.12g,%.12g\n",
                  r.transform.c_str(), r.p, r.k, r.si_sdr_noisy, r.si_sdr_enhanced,
                  r.improvement, r.seg_snr);
    out += buf;
  }
  return out;
}

std::string ReportTable::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const ReportRow& r : rows) {
    nlohmann::json j;
    j["transform"] = r.transform;
    j["p"] = r.p;
    j["K"] = r.k;
    j["si_sdr_noisy"] = r.si_sdr_noisy;
    j["si_sdr_enhanced"] = r.si_sdr_enhanced;
    j["improvement"] = r.improvement;
    j["seg_snr"] = r.seg_snr;
    arr.push_back(j);
  }
  return arr.dump(2);
}

ReportTable compare_transforms(const std::vector<Mixture>& mixtures,
                               const std::vector<double>& sparsity_list,
                               const std::vector<TransformKind>& transforms,
                               const SweepOptions& options) {
  if (mixtures.empty() || sparsity_list.empty() || transforms.empty())
    throw InvalidArgument("compare_transforms: empty inputs");

  const FourierMatrix fourier = dft_matrix(options.pad_to);
  ReportTable table;

  for (TransformKind kind : transforms) {
    for (double p : sparsity_list) {
      const std::size_t k = sparsity_to_k(p, options.pad_to);
      const GraphTopology topo = build_shift_operator(options.pad_to, k);

      GraphBasis basis;
      EvdBasis evd;
      SynthesisOperator synthesis;
      EnhanceOptions eo;
      eo.transform = kind;
      eo.frame_len = options.frame_len;
      eo.hop = options.hop;
      eo.pad_to = options.pad_to;
      eo.window = options.window;
      eo.mask_lo = options.mask_lo;
      eo.mask_hi = options.mask_hi;
      eo.fourier = &fourier;

      if (kind == TransformKind::kGftSvd || kind == TransformKind::kGftSvdLearned) {
        basis = svd(fixed_adjacency(topo, AdjacencyMode::kRowNormalized));
        eo.basis = &basis;
      }
      if (kind == TransformKind::kGftEvd) {
        evd = circulant_evd(topo);
        eo.evd = &evd;
      }
      if (kind == TransformKind::kGftSvdLearned) {
        // stack the noisy frames of the whole set as training data
        const std::vector<double> window =
            make_window(options.window, options.frame_len, options.hop);
        FrameSequence all;
        std::size_t total = 0;
        std::vector<FrameSequence> parts;
        parts.reserve(mixtures.size());
        for (const Mixture& m : mixtures) {
          parts.push_back(frame_signal(m.noisy, options.frame_len, options.hop, window,
                                       options.pad_to));
          total += parts.back().num_frames();
        }
        all = parts.front();
        all.frames = Matrix(total, options.pad_to);
        std::size_t at = 0;
        for (const FrameSequence& part : parts) {
          for (std::size_t f = 0; f < part.num_frames(); ++f, ++at)
            std::copy(part.frames.row(f), part.frames.row(f) + options.pad_to,
                      all.frames.row(at));
        }
        TrainConfig tc;
        tc.ridge = options.ridge;
        synthesis =
            train_inverse(all, basis, tc, InverseTrainMethod::kLeastSquares).first;
        eo.synthesis = &synthesis;
      }

      std::vector<MetricsReport> reports(mixtures.size());
      const auto run_range = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i)
          reports[i] = enhance(mixtures[i].noisy, mixtures[i].clean, eo).second;
      };
      const std::size_t jobs = std::max<std::size_t>(1, options.jobs);
      if (jobs == 1 || mixtures.size() < 2) {
        run_range(0, mixtures.size());
      } else {
        std::vector<std::thread> pool;
        const std::size_t workers = std::min(jobs, mixtures.size());
        const std::size_t chunk = (mixtures.size() + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
          const std::size_t begin = w * chunk;
          const std::size_t end = std::min(mixtures.size(), begin + chunk);
          if (begin < end) pool.emplace_back(run_range, begin, end);
        }
        for (auto& t : pool) t.join();
      }

      ReportRow row;
      row.transform = transform_name(kind);
      row.p = p;
      row.k = k;
      for (const MetricsReport& r : reports) {
        row.si_sdr_noisy += r.si_sdr_noisy;
        row.si_sdr_enhanced += r.si_sdr_enhanced;
        row.improvement += r.si_sdr_improvement;
        row.seg_snr += r.seg_snr_enhanced;
      }
      const double inv = 1.0 / static_cast<double>(reports.size());
      row.si_sdr_noisy *= inv;
      row.si_sdr_enhanced *= inv;
      row.improvement *= inv;
      row.seg_snr *= inv;
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

}  // namespace gftse
