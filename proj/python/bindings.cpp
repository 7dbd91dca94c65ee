// pybind11 module exposing the toolkit's main operations with numpy
// array conversions at the boundary.

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>
#include <cstring>
#include <vector>

#include "gftse/audio.hpp"
#include "gftse/enhance.hpp"
#include "gftse/errors.hpp"
#include "gftse/evd.hpp"
#include "gftse/framing.hpp"
#include "gftse/rng.hpp"
#include "gftse/sisdr.hpp"
#include "gftse/svd.hpp"
#include "gftse/topology.hpp"
#include "gftse/training.hpp"
#include "gftse/transforms.hpp"
#include "gftse/version.hpp"

namespace py = pybind11;
using darray = py::array_t<double, py::array::c_style | py::array::forcecast>;

namespace {

std::vector<double> to_vector(const darray& a) {
  if (a.ndim() != 1) throw gftse::InvalidArgument("expected a 1-D array");
  const double* p = a.data();
  return std::vector<double>(p, p + a.size());
}

py::array_t<double> from_vector(const std::vector<double>& v) {
  py::array_t<double> out(std::vector<py::ssize_t>{static_cast<py::ssize_t>(v.size())});
  std::memcpy(out.mutable_data(), v.data(), v.size() * sizeof(double));
  return out;
}

gftse::Matrix to_matrix(const darray& a) {
  if (a.ndim() != 2) throw gftse::InvalidArgument("expected a 2-D array");
  gftse::Matrix m(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)));
  std::memcpy(m.data(), a.data(), sizeof(double) * m.rows() * m.cols());
  return m;
}

py::array_t<double> from_matrix(const gftse::Matrix& m) {
  py::array_t<double> out({m.rows(), m.cols()});
  std::memcpy(out.mutable_data(), m.data(), sizeof(double) * m.rows() * m.cols());
  return out;
}

py::array_t<std::complex<double>> from_cmatrix(const gftse::CMatrix& m) {
  py::array_t<std::complex<double>> out({m.rows(), m.cols()});
  auto buf = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) buf(i, j) = m(i, j);
  return out;
}

gftse::AudioBuffer to_audio(const darray& samples, double sample_rate) {
  gftse::AudioBuffer buf;
  buf.samples = to_vector(samples);
  buf.sample_rate = sample_rate;
  return buf;
}

gftse::SignalKind kind_from_name(const std::string& name) {
  if (name == "sine") return gftse::SignalKind::kSine;
  if (name == "chirp") return gftse::SignalKind::kChirp;
  if (name == "white-noise") return gftse::SignalKind::kWhiteNoise;
  throw gftse::InvalidArgument("unknown signal kind: " + name);
}

gftse::WindowKind window_from_name(const std::string& name) {
  if (name == "sqrt-hann") return gftse::WindowKind::kSqrtHannCola;
  if (name == "rect") return gftse::WindowKind::kRect;
  throw gftse::InvalidArgument("unknown window kind: " + name);
}

py::dict metrics_dict(const gftse::MetricsReport& r) {
  py::dict d;
  d["si_sdr_noisy"] = r.si_sdr_noisy;
  d["si_sdr_enhanced"] = r.si_sdr_enhanced;
  d["si_sdr_improvement"] = r.si_sdr_improvement;
  d["seg_snr_enhanced"] = r.seg_snr_enhanced;
  d["num_frames"] = r.num_frames;
  return d;
}

py::dict report_dict(const gftse::TrainReport& r) {
  py::dict d;
  d["trace_db"] = r.trace_db;
  d["final_db"] = r.final_db;
  d["iterations"] = r.iterations;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "graph-spectral speech enhancement toolkit";
  m.attr("__version__") = gftse::kVersion;

  py::register_exception<gftse::InvalidArgument>(m, "InvalidArgumentError",
                                                 PyExc_ValueError);
  py::register_exception<gftse::IoError>(m, "IoError", PyExc_OSError);
  py::register_exception<gftse::NumericError>(m, "NumericError", PyExc_ArithmeticError);

  // ---- audio ----
  m.def(
      "synth_signal",
      [](const std::string& kind, double duration, double sample_rate, std::uint64_t seed,
         double freq, double f0, double f1) {
        gftse::SynthParams params;
        params.frequency_hz = freq;
        params.start_hz = f0;
        params.end_hz = f1;
        return from_vector(
            gftse::synth_signal(kind_from_name(kind), duration, sample_rate, seed, params)
                .samples);
      },
      py::arg("kind"), py::arg("duration"), py::arg("sample_rate") = 16000.0,
      py::arg("seed") = 0, py::arg("freq") = 440.0, py::arg("f0") = 100.0,
      py::arg("f1") = 4000.0,
      "Deterministic peak-normalized test signal (sine, chirp or white-noise).");

  m.def(
      "mix_at_snr",
      [](const darray& clean, const darray& noise, double snr_db, double sample_rate) {
        auto [noisy, gain] =
            gftse::mix_at_snr(to_audio(clean, sample_rate), to_audio(noise, sample_rate), snr_db);
        return py::make_tuple(from_vector(noisy.samples), gain);
      },
      py::arg("clean"), py::arg("noise"), py::arg("snr_db"), py::arg("sample_rate") = 16000.0,
      "Scale noise to the requested snr; returns (noisy, noise_gain).");

  m.def(
      "read_wav",
      [](const std::string& path) {
        const gftse::AudioBuffer buf = gftse::read_wav(path);
        return py::make_tuple(from_vector(buf.samples), buf.sample_rate);
      },
      py::arg("path"), "Read a PCM-16 or float-32 RIFF/WAVE file; returns (samples, rate).");

  m.def(
      "write_wav",
      [](const std::string& path, const darray& samples, double sample_rate,
         const std::string& format) {
        gftse::write_wav(path, to_audio(samples, sample_rate),
                         format == "pcm16" ? gftse::WavFormat::kPcm16
                                           : gftse::WavFormat::kFloat32);
      },
      py::arg("path"), py::arg("samples"), py::arg("sample_rate") = 16000.0,
      py::arg("format") = "float32");

  // ---- framing ----
  py::class_<gftse::FrameSequence>(m, "FrameSequence")
      .def_property_readonly("frames",
                             [](const gftse::FrameSequence& s) { return from_matrix(s.frames); })
      .def_readonly("frame_len", &gftse::FrameSequence::frame_len)
      .def_readonly("hop", &gftse::FrameSequence::hop)
      .def_readonly("pad_to", &gftse::FrameSequence::pad_to)
      .def_property_readonly("num_frames",
                             [](const gftse::FrameSequence& s) { return s.num_frames(); });

  m.def(
      "frame_signal",
      [](const darray& samples, double sample_rate, std::size_t frame_len, std::size_t hop,
         std::size_t pad_to, const std::string& window) {
        const auto w = gftse::make_window(window_from_name(window), frame_len, hop);
        return gftse::frame_signal(to_audio(samples, sample_rate), frame_len, hop, w, pad_to);
      },
      py::arg("samples"), py::arg("sample_rate") = 16000.0, py::arg("frame_len") = 400,
      py::arg("hop") = 100, py::arg("pad_to") = 512, py::arg("window") = "sqrt-hann");

  m.def(
      "overlap_add",
      [](const gftse::FrameSequence& seq) {
        return from_vector(gftse::overlap_add(seq, seq.window).samples);
      },
      py::arg("frames"), "Weighted overlap-add with the analysis window as synthesis window.");

  // ---- topology ----
  m.def(
      "build_shift_operator",
      [](std::size_t n, std::size_t k) {
        return from_matrix(gftse::build_shift_operator(n, k).shift_operator);
      },
      py::arg("n"), py::arg("k"), "Binary cyclic shift operator W.");

  m.def("sparsity_to_k", &gftse::sparsity_to_k, py::arg("p"), py::arg("n"),
        "K = clamp(round(p*N), 1, N-1).");

  m.def(
      "fixed_adjacency",
      [](std::size_t n, std::size_t k, bool row_normalized) {
        return from_matrix(gftse::fixed_adjacency(
            gftse::build_shift_operator(n, k),
            row_normalized ? gftse::AdjacencyMode::kRowNormalized
                           : gftse::AdjacencyMode::kBinary));
      },
      py::arg("n"), py::arg("k"), py::arg("row_normalized") = true);

  py::class_<gftse::LearnableTopology>(m, "LearnableTopology")
      .def(py::init([](std::size_t n, std::size_t k, const std::string& init,
                       std::uint64_t seed) {
             const auto mode = init == "zeros" ? gftse::TopologyInit::kZeros
                                               : gftse::TopologyInit::kSeededUniform;
             if (init != "zeros" && init != "uniform")
               throw gftse::InvalidArgument("init must be 'zeros' or 'uniform'");
             return gftse::LearnableTopology(gftse::build_shift_operator(n, k), mode, seed);
           }),
           py::arg("n"), py::arg("k"), py::arg("init") = "zeros", py::arg("seed") = 0)
      .def_property(
          "theta",
          [](const gftse::LearnableTopology& t) { return from_vector(t.theta()); },
          [](gftse::LearnableTopology& t, const darray& theta) {
            t.set_theta(to_vector(theta));
          })
      .def("adjacency",
           [](const gftse::LearnableTopology& t) { return from_matrix(t.adjacency()); })
      .def("to_json", &gftse::LearnableTopology::to_json)
      .def_static("from_json", &gftse::LearnableTopology::from_json)
      .def_property_readonly("n", &gftse::LearnableTopology::n_vertices)
      .def_property_readonly("k", &gftse::LearnableTopology::k_neighbors);

  // ---- spectral bases ----
  py::class_<gftse::GraphBasis>(m, "GraphBasis")
      .def_property_readonly("psi",
                             [](const gftse::GraphBasis& b) { return from_matrix(b.psi); })
      .def_property_readonly(
          "sigma", [](const gftse::GraphBasis& b) { return from_vector(b.sigma); })
      .def_property_readonly("gamma",
                             [](const gftse::GraphBasis& b) { return from_matrix(b.gamma); })
      .def_readonly("basis_id", &gftse::GraphBasis::basis_id);

  m.def(
      "svd", [](const darray& a) { return gftse::svd(to_matrix(a)); }, py::arg("a"),
      "One-sided Jacobi SVD; psi @ diag(sigma) @ gamma reconstructs the input.");

  m.def(
      "dft_matrix", [](std::size_t n) { return from_cmatrix(gftse::dft_matrix(n).d); },
      py::arg("n"));

  m.def(
      "circulant_evd",
      [](std::size_t n, std::size_t k) {
        const gftse::EvdBasis basis = gftse::circulant_evd(gftse::build_shift_operator(n, k));
        py::array_t<std::complex<double>> lambda(
            std::vector<py::ssize_t>{static_cast<py::ssize_t>(n)});
        auto buf = lambda.mutable_unchecked<1>();
        for (std::size_t i = 0; i < n; ++i) buf(i) = basis.lambda[i];
        return py::make_tuple(from_cmatrix(basis.u), lambda);
      },
      py::arg("n"), py::arg("k"),
      "Closed-form circulant eigendecomposition; returns (U, lambda).");

  // ---- transforms ----
  py::class_<gftse::TimeGraphSpectrum>(m, "TimeGraphSpectrum")
      .def_property_readonly(
          "data", [](const gftse::TimeGraphSpectrum& s) { return from_matrix(s.data); })
      .def_readonly("basis_id", &gftse::TimeGraphSpectrum::basis_id);

  m.def("gft_svd_forward", &gftse::gft_svd_forward, py::arg("frames"), py::arg("basis"));
  m.def(
      "gft_svd_inverse",
      [](const gftse::TimeGraphSpectrum& spec, const gftse::GraphBasis& basis) {
        return from_matrix(gftse::gft_svd_inverse(spec, basis));
      },
      py::arg("spectrum"), py::arg("basis"));

  m.def(
      "stft_forward",
      [](const gftse::FrameSequence& frames) {
        return from_cmatrix(gftse::stft_forward(frames, gftse::dft_matrix(frames.pad_to)).data);
      },
      py::arg("frames"));

  // ---- metrics and training ----
  m.def(
      "si_sdr",
      [](const darray& est, const darray& ref) {
        const auto e = to_vector(est);
        const auto r = to_vector(ref);
        return gftse::si_sdr(e, r);
      },
      py::arg("estimate"), py::arg("reference"), "Scale-invariant SDR in dB.");

  m.def(
      "si_sdr_gradient",
      [](const darray& est, const darray& ref) {
        const auto e = to_vector(est);
        const auto r = to_vector(ref);
        return from_vector(gftse::si_sdr_gradient(e, r));
      },
      py::arg("estimate"), py::arg("reference"));

  m.def(
      "train_inverse",
      [](const gftse::FrameSequence& frames, const gftse::GraphBasis& basis,
         const std::string& method, double ridge, double learning_rate,
         std::size_t max_iters) {
        gftse::TrainConfig config;
        config.ridge = ridge;
        config.learning_rate = learning_rate;
        config.max_iters = max_iters;
        const auto m2 = method == "least-squares" ? gftse::InverseTrainMethod::kLeastSquares
                                                  : gftse::InverseTrainMethod::kGradient;
        if (method != "least-squares" && method != "gradient")
          throw gftse::InvalidArgument("method must be 'least-squares' or 'gradient'");
        auto [op, report] = gftse::train_inverse(frames, basis, config, m2);
        return py::make_tuple(from_matrix(op.b), report_dict(report));
      },
      py::arg("frames"), py::arg("basis"), py::arg("method") = "least-squares",
      py::arg("ridge") = 1e-6, py::arg("learning_rate") = 1.0, py::arg("max_iters") = 50,
      "Learn the synthesis operator; returns (B, report).");

  m.def(
      "train_topology",
      [](const darray& clean, const darray& noisy, double sample_rate, std::size_t n,
         std::size_t k, std::size_t frame_len, std::size_t hop, double learning_rate,
         std::size_t max_iters, double fd_epsilon) {
        std::vector<gftse::Mixture> pairs(1);
        pairs[0].clean = to_audio(clean, sample_rate);
        pairs[0].noisy = to_audio(noisy, sample_rate);
        gftse::TrainConfig config;
        config.learning_rate = learning_rate;
        config.max_iters = max_iters;
        config.fd_epsilon = fd_epsilon;
        gftse::TopologyPipeline pipeline;
        pipeline.frame_len = frame_len;
        pipeline.hop = hop;
        auto [topo, report] = gftse::train_topology(
            pairs, gftse::build_shift_operator(n, k), config, pipeline);
        return py::make_tuple(from_vector(topo.theta()), report_dict(report));
      },
      py::arg("clean"), py::arg("noisy"), py::arg("sample_rate") = 16000.0, py::arg("n") = 32,
      py::arg("k") = 3, py::arg("frame_len") = 32, py::arg("hop") = 8,
      py::arg("learning_rate") = 1.0, py::arg("max_iters") = 10, py::arg("fd_epsilon") = 1e-4,
      "Finite-difference topology training on one clean/noisy pair.");

  // ---- enhancement ----
  m.def(
      "enhance",
      [](const darray& noisy, const darray& clean, double sample_rate,
         const std::string& transform, double p, std::size_t frame_len, std::size_t hop,
         std::size_t pad_to, const std::string& synthesis, double ridge) {
        gftse::TransformKind kind = gftse::parse_transform(transform);
        if (synthesis == "learned") {
          if (kind != gftse::TransformKind::kGftSvd)
            throw gftse::InvalidArgument("learned synthesis applies to gft-svd only");
          kind = gftse::TransformKind::kGftSvdLearned;
        }
        const gftse::AudioBuffer noisy_buf = to_audio(noisy, sample_rate);
        const gftse::AudioBuffer clean_buf = to_audio(clean, sample_rate);

        gftse::EnhanceOptions options;
        options.transform = kind;
        options.frame_len = frame_len;
        options.hop = hop;
        options.pad_to = pad_to;

        gftse::GraphBasis basis;
        gftse::EvdBasis evd;
        gftse::FourierMatrix fourier;
        gftse::SynthesisOperator synth_op;
        const std::size_t kk = gftse::sparsity_to_k(p, pad_to);
        if (kind == gftse::TransformKind::kGftSvd ||
            kind == gftse::TransformKind::kGftSvdLearned) {
          basis = gftse::svd(gftse::fixed_adjacency(gftse::build_shift_operator(pad_to, kk),
                                                    gftse::AdjacencyMode::kRowNormalized));
          options.basis = &basis;
          if (kind == gftse::TransformKind::kGftSvdLearned) {
            const auto w = gftse::make_window(gftse::WindowKind::kSqrtHannCola, frame_len, hop);
            gftse::TrainConfig tc;
            tc.ridge = ridge;
            synth_op = gftse::train_inverse(
                           gftse::frame_signal(noisy_buf, frame_len, hop, w, pad_to), basis,
                           tc, gftse::InverseTrainMethod::kLeastSquares)
                           .first;
            options.synthesis = &synth_op;
          }
        } else if (kind == gftse::TransformKind::kGftEvd) {
          evd = gftse::circulant_evd(gftse::build_shift_operator(pad_to, kk));
          options.evd = &evd;
        } else {
          fourier = gftse::dft_matrix(pad_to);
          options.fourier = &fourier;
        }

        auto [enhanced, report] = gftse::enhance(noisy_buf, clean_buf, options);
        return py::make_tuple(from_vector(enhanced.samples), metrics_dict(report));
      },
      py::arg("noisy"), py::arg("clean"), py::arg("sample_rate") = 16000.0,
      py::arg("transform") = "gft-svd", py::arg("p") = 0.01, py::arg("frame_len") = 400,
      py::arg("hop") = 100, py::arg("pad_to") = 512, py::arg("synthesis") = "exact",
      py::arg("ridge") = 1e-6,
      "Oracle-mask enhancement pipeline; returns (enhanced, metrics).");

  m.def(
      "evaluate",
      [](const darray& enhanced, const darray& clean, const darray& noisy,
         double sample_rate) {
        return metrics_dict(gftse::evaluate(to_audio(enhanced, sample_rate),
                                            to_audio(clean, sample_rate),
                                            to_audio(noisy, sample_rate)));
      },
      py::arg("enhanced"), py::arg("clean"), py::arg("noisy"), py::arg("sample_rate") = 16000.0);

  m.def(
      "compare_transforms",
      [](std::size_t mixtures, double duration, double sample_rate, double snr_db,
         std::uint64_t seed, const std::vector<double>& p_list,
         const std::vector<std::string>& transforms, std::size_t frame_len, std::size_t hop,
         std::size_t pad_to) {
        std::vector<gftse::TransformKind> kinds;
        for (const auto& name : transforms) kinds.push_back(gftse::parse_transform(name));
        gftse::SweepOptions options;
        options.frame_len = frame_len;
        options.hop = hop;
        options.pad_to = pad_to;
        const auto set = gftse::make_mixture_set(seed, mixtures, duration, sample_rate, snr_db);
        const gftse::ReportTable table =
            gftse::compare_transforms(set, p_list, kinds, options);
        py::list rows;
        for (const auto& r : table.rows) {
          py::dict d;
          d["transform"] = r.transform;
          d["p"] = r.p;
          d["K"] = r.k;
          d["si_sdr_noisy"] = r.si_sdr_noisy;
          d["si_sdr_enhanced"] = r.si_sdr_enhanced;
          d["improvement"] = r.improvement;
          d["seg_snr"] = r.seg_snr;
          rows.append(d);
        }
        return rows;
      },
      py::arg("mixtures") = 4, py::arg("duration") = 0.5, py::arg("sample_rate") = 16000.0,
      py::arg("snr_db") = 0.0, py::arg("seed") = 0,
      py::arg("p_list") = std::vector<double>{0.01, 0.04, 0.12, 0.2, 0.4, 1.0},
      py::arg("transforms") = std::vector<std::string>{"stft", "gft-evd", "gft-svd"},
      py::arg("frame_len") = 400, py::arg("hop") = 100, py::arg("pad_to") = 512,
      "Sparsity-grid comparison over a seeded mixture set; returns report rows.");
}
