// gftse command-line tool: synthesis, mixing, transforms, training,
// enhancement, evaluation and sparsity sweeps, with reproducible seeded
// runs.  Every command validates its inputs first, computes, then writes
// its artifacts plus a manifest into --out.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "gftse/audio.hpp"
#include "gftse/enhance.hpp"
#include "gftse/errors.hpp"
#include "gftse/evd.hpp"
#include "gftse/framing.hpp"
#include "gftse/rng.hpp"
#include "gftse/svd.hpp"
#include "gftse/topology.hpp"
#include "gftse/training.hpp"
#include "gftse/transforms.hpp"
#include "gftse/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitNumeric = 4;

// Ordered key=value view of a command's effective settings; doubles go
// through %.12g so manifests are byte-stable.
class Settings {
 public:
  void add(const std::string& key, const std::string& v) { items_.emplace_back(key, v); }
  void add(const std::string& key, const char* v) { items_.emplace_back(key, v); }
  void add(const std::string& key, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    items_.emplace_back(key, buf);
  }
  void add(const std::string& key, std::uint64_t v) { items_.emplace_back(key, std::to_string(v)); }

  std::uint64_t hash() const {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const auto& [k, v] : items_) {
      h = gftse::fnv1a(k.data(), k.size(), h);
      h = gftse::fnv1a("=", 1, h);
      h = gftse::fnv1a(v.data(), v.size(), h);
      h = gftse::fnv1a("\n", 1, h);
    }
    return h;
  }

  json to_json() const {
    json j = json::object();
    for (const auto& [k, v] : items_) j[k] = v;
    return j;
  }

 private:
  std::vector<std::pair<std::string, std::string>> items_;
};

struct GlobalArgs {
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  std::string out = ".";
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::trunc | std::ios::binary);
  if (!f) throw gftse::IoError(gftse::IoError::Code::kUnwritablePath, "cannot write " + path);
  f << text;
  if (!f) throw gftse::IoError(gftse::IoError::Code::kUnwritablePath, "write failed: " + path);
}

void write_manifest(const GlobalArgs& g, const std::string& command, Settings settings) {
  settings.add("seed", g.seed);
  settings.add("jobs", g.jobs);
  json j;
  j["command"] = command;
  j["version"] = gftse::kVersion;
  j["seed"] = g.seed;
  j["config"] = settings.to_json();
  char hash[20];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(settings.hash()));
  j["config_hash"] = hash;
  write_text((fs::path(g.out) / (command + "-manifest.json")).string(), j.dump(2) + "\n");
}

void ensure_out_dir(const GlobalArgs& g) {
  std::error_code ec;
  fs::create_directories(g.out, ec);
  if (ec)
    throw gftse::IoError(gftse::IoError::Code::kUnwritablePath,
                         "cannot create output directory " + g.out);
}

std::string default_artifact(const GlobalArgs& g, const char* name) {
  return (fs::path(g.out) / name).string();
}

gftse::WavFormat parse_format(const std::string& name) {
  if (name == "pcm16") return gftse::WavFormat::kPcm16;
  if (name == "float32") return gftse::WavFormat::kFloat32;
  throw gftse::InvalidArgument("unknown wav format: " + name);
}

gftse::SignalKind parse_kind(const std::string& name) {
  if (name == "sine") return gftse::SignalKind::kSine;
  if (name == "chirp") return gftse::SignalKind::kChirp;
  if (name == "white-noise") return gftse::SignalKind::kWhiteNoise;
  throw gftse::InvalidArgument("unknown signal kind: " + name);
}

std::vector<double> parse_double_list(const std::string& csv) {
  std::vector<double> out;
  std::size_t at = 0;
  while (at < csv.size()) {
    std::size_t comma = csv.find(',', at);
    if (comma == std::string::npos) comma = csv.size();
    const std::string tok = csv.substr(at, comma - at);
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw gftse::InvalidArgument("bad number in list: '" + tok + "'");
    }
    at = comma + 1;
  }
  if (out.empty()) throw gftse::InvalidArgument("empty number list");
  return out;
}

std::vector<std::string> parse_string_list(const std::string& csv) {
  std::vector<std::string> out;
  std::size_t at = 0;
  while (at < csv.size()) {
    std::size_t comma = csv.find(',', at);
    if (comma == std::string::npos) comma = csv.size();
    out.push_back(csv.substr(at, comma - at));
    at = comma + 1;
  }
  if (out.empty()) throw gftse::InvalidArgument("empty name list");
  return out;
}

// Shared framing options; defaults follow the 16 kHz / 25 ms / 6.25 ms /
// 512-point configuration.
struct FramingArgs {
  std::size_t frame_len = 400;
  std::size_t hop = 100;
  std::size_t pad_to = 512;

  void attach(CLI::App* cmd) {
    cmd->add_option("--frame-len", frame_len, "analysis frame length in samples");
    cmd->add_option("--hop", hop, "hop size in samples");
    cmd->add_option("--pad-to", pad_to, "transform size (zero-padded frame length)");
  }
  void record(Settings& s) const {
    s.add("frame_len", frame_len);
    s.add("hop", hop);
    s.add("pad_to", pad_to);
  }
};

struct TrainArgs {
  double learning_rate = 1.0;
  std::size_t max_iters = 50;
  double tolerance = 1e-6;
  double fd_epsilon = 1e-4;
  double ridge = 1e-6;

  void attach(CLI::App* cmd) {
    cmd->add_option("--learning-rate", learning_rate, "gradient step size");
    cmd->add_option("--max-iters", max_iters, "iteration cap");
    cmd->add_option("--tolerance", tolerance, "minimum accepted objective gain (dB)");
    cmd->add_option("--fd-epsilon", fd_epsilon, "finite-difference probe step");
    cmd->add_option("--ridge", ridge, "least-squares regularization weight");
  }
  gftse::TrainConfig to_config(std::uint64_t seed) const {
    gftse::TrainConfig c;
    c.learning_rate = learning_rate;
    c.max_iters = max_iters;
    c.tolerance = tolerance;
    c.seed = seed;
    c.fd_epsilon = fd_epsilon;
    c.ridge = ridge;
    return c;
  }
  void record(Settings& s) const {
    s.add("learning_rate", learning_rate);
    s.add("max_iters", max_iters);
    s.add("tolerance", tolerance);
    s.add("fd_epsilon", fd_epsilon);
    s.add("ridge", ridge);
  }
};

gftse::GraphBasis fixed_basis(double p, std::size_t n) {
  const std::size_t k = gftse::sparsity_to_k(p, n);
  return gftse::svd(gftse::fixed_adjacency(gftse::build_shift_operator(n, k),
                                           gftse::AdjacencyMode::kRowNormalized));
}

void write_complex_csv(const std::string& path, const gftse::CMatrix& m) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw gftse::IoError(gftse::IoError::Code::kUnwritablePath, "cannot write " + path);
  char buf[96];
  for (std::size_t f = 0; f < m.rows(); ++f) {
    for (std::size_t k = 0; k < m.cols(); ++k) {
      std::snprintf(buf, sizeof(buf), "%.12g,%.12g", m(f, k).real(), m(f, k).imag());
      if (k) out << ',';
      out << buf;
    }
    out << '\n';
  }
}

int run(int argc, char** argv) {
  CLI::App app{"graph-spectral speech enhancement toolkit"};
  app.require_subcommand(1);

  GlobalArgs g;
  std::string config_path;

  const auto attach_globals = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "flat key=value config file")
        ->configurable(false);
    cmd->add_option("--seed", g.seed, "run seed; all randomness derives from it");
    cmd->add_option("--jobs", g.jobs, "parallel worker bound");
    cmd->add_option("--out", g.out, "output directory");
    for (auto* opt : cmd->get_options()) opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  };

  // ---- synth ----
  auto* synth = app.add_subcommand("synth", "generate a deterministic test signal");
  std::string synth_kind = "sine", synth_out, synth_format = "float32";
  double synth_duration = 1.0, synth_rate = 16000.0, synth_freq = 440.0,
         synth_f0 = 100.0, synth_f1 = 4000.0;
  synth->add_option("--kind", synth_kind, "sine|chirp|white-noise");
  synth->add_option("--duration", synth_duration, "seconds");
  synth->add_option("--sample-rate", synth_rate, "samples/second");
  synth->add_option("--freq", synth_freq, "sine frequency (Hz)");
  synth->add_option("--f0", synth_f0, "chirp start frequency (Hz)");
  synth->add_option("--f1", synth_f1, "chirp end frequency (Hz)");
  synth->add_option("--format", synth_format, "pcm16|float32");
  synth->add_option("--out-wav", synth_out, "output wav path");

  // ---- mix ----
  auto* mix = app.add_subcommand("mix", "mix clean speech with noise at a target snr");
  std::string mix_clean, mix_noise, mix_out, mix_format = "float32";
  double mix_snr = 0.0;
  mix->add_option("--clean", mix_clean, "clean wav path")->required();
  mix->add_option("--noise", mix_noise, "noise wav path")->required();
  mix->add_option("--snr-db", mix_snr, "target snr in dB");
  mix->add_option("--format", mix_format, "pcm16|float32");
  mix->add_option("--out-wav", mix_out, "output wav path");

  // ---- transform ----
  auto* trans = app.add_subcommand("transform", "dump the spectrum of a wav file");
  std::string trans_in, trans_name = "gft-svd", trans_csv, trans_bin, trans_basis;
  double trans_p = 0.01;
  FramingArgs trans_framing;
  trans->add_option("--in", trans_in, "input wav path")->required();
  trans->add_option("--transform", trans_name, "stft|gft-evd|gft-svd");
  trans->add_option("--p", trans_p, "graph sparsity fraction");
  trans_framing.attach(trans);
  trans->add_option("--out-csv", trans_csv, "spectrum csv path");
  trans->add_option("--out-bin", trans_bin, "spectrum binary path (gft-svd only)");
  trans->add_option("--out-basis", trans_basis, "basis blob path (gft-svd only)");

  // ---- train-inverse ----
  auto* tinv = app.add_subcommand("train-inverse", "learn the synthesis operator");
  std::string tinv_in, tinv_method = "least-squares", tinv_basis, tinv_op, tinv_report,
      tinv_trace;
  double tinv_p = 0.01;
  FramingArgs tinv_framing;
  TrainArgs tinv_train;
  tinv->add_option("--in", tinv_in, "training wav path")->required();
  tinv->add_option("--method", tinv_method, "least-squares|gradient");
  tinv->add_option("--p", tinv_p, "graph sparsity fraction");
  tinv_framing.attach(tinv);
  tinv_train.attach(tinv);
  tinv->add_option("--out-basis", tinv_basis, "basis blob path");
  tinv->add_option("--out-operator", tinv_op, "operator blob path");
  tinv->add_option("--report", tinv_report, "training report json path");
  tinv->add_option("--trace", tinv_trace, "objective trace csv path");

  // ---- train-topology ----
  auto* ttop = app.add_subcommand("train-topology", "learn the graph adjacency weights");
  std::string ttop_clean, ttop_noisy, ttop_out, ttop_report, ttop_trace;
  std::size_t ttop_n = 32, ttop_k = 3, ttop_mixtures = 4;
  std::size_t ttop_frame = 32, ttop_hop = 8;
  double ttop_duration = 0.5, ttop_snr = 0.0, ttop_rate = 16000.0;
  TrainArgs ttop_train;
  ttop->add_option("--clean", ttop_clean, "clean wav (with --noisy: train on this pair)");
  ttop->add_option("--noisy", ttop_noisy, "noisy wav");
  ttop->add_option("--n", ttop_n, "graph vertex count (<= 64)");
  ttop->add_option("--k", ttop_k, "neighbors per vertex");
  ttop->add_option("--frame-len", ttop_frame, "frame length (<= n)");
  ttop->add_option("--hop", ttop_hop, "hop size");
  ttop->add_option("--mixtures", ttop_mixtures, "synthetic pair count (no wav inputs)");
  ttop->add_option("--duration", ttop_duration, "synthetic pair duration (s)");
  ttop->add_option("--snr-db", ttop_snr, "synthetic mixture snr");
  ttop->add_option("--sample-rate", ttop_rate, "synthetic sample rate");
  ttop_train.attach(ttop);
  ttop->add_option("--out-topology", ttop_out, "topology json path");
  ttop->add_option("--report", ttop_report, "training report json path");
  ttop->add_option("--trace", ttop_trace, "objective trace csv path");

  // ---- enhance ----
  auto* enh = app.add_subcommand("enhance", "oracle-mask enhancement of a noisy wav");
  std::string enh_noisy, enh_clean, enh_name = "gft-svd", enh_synthesis = "exact",
      enh_out, enh_report, enh_format = "float32";
  double enh_p = 0.01, enh_ridge = 1e-6;
  FramingArgs enh_framing;
  enh->add_option("--noisy", enh_noisy, "noisy wav path")->required();
  enh->add_option("--clean", enh_clean, "clean reference wav path")->required();
  enh->add_option("--transform", enh_name, "stft|gft-evd|gft-svd");
  enh->add_option("--synthesis", enh_synthesis, "exact|learned (gft-svd only)");
  enh->add_option("--p", enh_p, "graph sparsity fraction");
  enh->add_option("--ridge", enh_ridge, "ridge for learned synthesis training");
  enh_framing.attach(enh);
  enh->add_option("--format", enh_format, "pcm16|float32");
  enh->add_option("--out-wav", enh_out, "enhanced wav path");
  enh->add_option("--report", enh_report, "metrics report json path");

  // ---- evaluate ----
  auto* eval = app.add_subcommand("evaluate", "score an enhanced wav against references");
  std::string eval_enhanced, eval_clean, eval_noisy, eval_report;
  eval->add_option("--enhanced", eval_enhanced, "enhanced wav path")->required();
  eval->add_option("--clean", eval_clean, "clean wav path")->required();
  eval->add_option("--noisy", eval_noisy, "noisy wav path")->required();
  eval->add_option("--report", eval_report, "metrics report json path");

  // ---- sweep ----
  auto* sweep = app.add_subcommand("sweep", "transform comparison over a sparsity grid");
  std::string sweep_p = "0.01,0.04,0.12,0.2,0.4,1.0";
  std::string sweep_transforms = "stft,gft-evd,gft-svd";
  std::string sweep_csv, sweep_json;
  std::size_t sweep_mixtures = 10;
  double sweep_duration = 1.0, sweep_snr = 0.0, sweep_rate = 16000.0, sweep_ridge = 1e-6;
  FramingArgs sweep_framing;
  sweep->add_option("--p-list", sweep_p, "comma-separated sparsity fractions");
  sweep->add_option("--transforms", sweep_transforms, "comma-separated transform names");
  sweep->add_option("--mixtures", sweep_mixtures, "seeded mixture count");
  sweep->add_option("--duration", sweep_duration, "mixture duration (s)");
  sweep->add_option("--snr-db", sweep_snr, "mixture snr");
  sweep->add_option("--sample-rate", sweep_rate, "mixture sample rate");
  sweep->add_option("--ridge", sweep_ridge, "ridge for gft-svd-learned rows");
  sweep_framing.attach(sweep);
  sweep->add_option("--out-csv", sweep_csv, "report table csv path");
  sweep->add_option("--out-json", sweep_json, "report table json path");

  for (auto* cmd : {synth, mix, trans, tinv, ttop, enh, eval, sweep}) attach_globals(cmd);

  // --config is resolved before the real parse: file keys become argv
  // entries ahead of the user's flags, and TakeLast lets the flags win.
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string preload_config;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) preload_config = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) preload_config = args[i].substr(9);
  }
  if (!preload_config.empty() && !args.empty()) {
    std::ifstream f(preload_config);
    if (!f)
      throw gftse::IoError(gftse::IoError::Code::kMissingFile,
                           "cannot open config file " + preload_config);
    std::vector<std::string> injected;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(f, line)) {
      ++line_no;
      if (line.empty() || line[0] == '#') continue;
      const std::size_t eq = line.find('=');
      if (eq == std::string::npos || eq == 0)
        throw gftse::InvalidArgument("config line " + std::to_string(line_no) +
                                     " is not key=value: '" + line + "'");
      injected.push_back("--" + line.substr(0, eq) + "=" + line.substr(eq + 1));
    }
    args.insert(args.begin() + 1, injected.begin(), injected.end());
  }

  {
    std::vector<const char*> cargs;
    cargs.push_back(argv[0]);
    for (const auto& a : args) cargs.push_back(a.c_str());
    try {
      app.parse(static_cast<int>(cargs.size()), cargs.data());
    } catch (const CLI::Success& e) {
      return app.exit(e);  // --help and friends
    }
  }

  if (synth->parsed()) {
    const gftse::SignalKind kind = parse_kind(synth_kind);
    const gftse::WavFormat format = parse_format(synth_format);
    ensure_out_dir(g);
    if (synth_out.empty()) synth_out = default_artifact(g, "synth.wav");

    gftse::SynthParams params;
    params.frequency_hz = synth_freq;
    params.start_hz = synth_f0;
    params.end_hz = synth_f1;
    const gftse::AudioBuffer buf = gftse::synth_signal(
        kind, synth_duration, synth_rate, gftse::sub_seed(g.seed, "signal"), params);
    gftse::write_wav(synth_out, buf, format);

    Settings s;
    s.add("kind", synth_kind);
    s.add("duration", synth_duration);
    s.add("sample_rate", synth_rate);
    s.add("freq", synth_freq);
    s.add("f0", synth_f0);
    s.add("f1", synth_f1);
    s.add("format", synth_format);
    s.add("out_wav", synth_out);
    write_manifest(g, "synth", std::move(s));
    return 0;
  }

  if (mix->parsed()) {
    const gftse::WavFormat format = parse_format(mix_format);
    ensure_out_dir(g);
    if (mix_out.empty()) mix_out = default_artifact(g, "noisy.wav");

    const gftse::AudioBuffer clean = gftse::read_wav(mix_clean);
    const gftse::AudioBuffer noise = gftse::read_wav(mix_noise);
    const auto [noisy, gain] = gftse::mix_at_snr(clean, noise, mix_snr);
    gftse::write_wav(mix_out, noisy, format);

    json rep;
    rep["snr_db"] = mix_snr;
    rep["noise_gain"] = gain;
    write_text(default_artifact(g, "mix-report.json"), rep.dump(2) + "\n");

    Settings s;
    s.add("clean", mix_clean);
    s.add("noise", mix_noise);
    s.add("snr_db", mix_snr);
    s.add("format", mix_format);
    s.add("out_wav", mix_out);
    write_manifest(g, "mix", std::move(s));
    return 0;
  }

  if (trans->parsed()) {
    const gftse::AudioBuffer buf = gftse::read_wav(trans_in);
    ensure_out_dir(g);
    if (trans_csv.empty()) trans_csv = default_artifact(g, "spectrum.csv");

    if (trans_name != "gft-svd" && (!trans_bin.empty() || !trans_basis.empty()))
      throw gftse::InvalidArgument("--out-bin/--out-basis apply to gft-svd only");

    const auto window = gftse::make_window(gftse::WindowKind::kSqrtHannCola,
                                           trans_framing.frame_len, trans_framing.hop);
    const gftse::FrameSequence frames = gftse::frame_signal(
        buf, trans_framing.frame_len, trans_framing.hop, window, trans_framing.pad_to);

    if (trans_name == "gft-svd") {
      const gftse::GraphBasis basis = fixed_basis(trans_p, trans_framing.pad_to);
      const gftse::TimeGraphSpectrum spec = gftse::gft_svd_forward(frames, basis);
      gftse::write_spectrum_csv(trans_csv, spec);
      if (!trans_bin.empty()) gftse::write_spectrum_bin(trans_bin, spec);
      if (!trans_basis.empty()) gftse::save_basis(trans_basis, basis);
    } else if (trans_name == "gft-evd") {
      const std::size_t k = gftse::sparsity_to_k(trans_p, trans_framing.pad_to);
      const gftse::EvdBasis basis =
          gftse::circulant_evd(gftse::build_shift_operator(trans_framing.pad_to, k));
      write_complex_csv(trans_csv, gftse::gft_evd_forward(frames, basis).data);
    } else if (trans_name == "stft") {
      const gftse::FourierMatrix fourier = gftse::dft_matrix(trans_framing.pad_to);
      write_complex_csv(trans_csv, gftse::stft_forward(frames, fourier).data);
    } else {
      throw gftse::InvalidArgument("unknown transform: " + trans_name);
    }

    Settings s;
    s.add("in", trans_in);
    s.add("transform", trans_name);
    s.add("p", trans_p);
    trans_framing.record(s);
    s.add("out_csv", trans_csv);
    if (!trans_bin.empty()) s.add("out_bin", trans_bin);
    if (!trans_basis.empty()) s.add("out_basis", trans_basis);
    write_manifest(g, "transform", std::move(s));
    return 0;
  }

  if (tinv->parsed()) {
    const gftse::AudioBuffer buf = gftse::read_wav(tinv_in);
    gftse::InverseTrainMethod method;
    if (tinv_method == "least-squares") method = gftse::InverseTrainMethod::kLeastSquares;
    else if (tinv_method == "gradient") method = gftse::InverseTrainMethod::kGradient;
    else throw gftse::InvalidArgument("unknown method: " + tinv_method);
    ensure_out_dir(g);
    if (tinv_basis.empty()) tinv_basis = default_artifact(g, "basis.bin");
    if (tinv_op.empty()) tinv_op = default_artifact(g, "operator.bin");
    if (tinv_report.empty()) tinv_report = default_artifact(g, "train-inverse-report.json");
    if (tinv_trace.empty()) tinv_trace = default_artifact(g, "train-inverse-trace.csv");

    const auto window = gftse::make_window(gftse::WindowKind::kSqrtHannCola,
                                           tinv_framing.frame_len, tinv_framing.hop);
    const gftse::FrameSequence frames = gftse::frame_signal(
        buf, tinv_framing.frame_len, tinv_framing.hop, window, tinv_framing.pad_to);
    const gftse::GraphBasis basis = fixed_basis(tinv_p, tinv_framing.pad_to);
    const auto [op, report] =
        gftse::train_inverse(frames, basis, tinv_train.to_config(g.seed), method);

    gftse::save_basis(tinv_basis, basis);
    gftse::save_operator(tinv_op, op);
    write_text(tinv_report, report.to_json() + "\n");
    write_text(tinv_trace, report.trace_to_csv());

    Settings s;
    s.add("in", tinv_in);
    s.add("method", tinv_method);
    s.add("p", tinv_p);
    tinv_framing.record(s);
    tinv_train.record(s);
    s.add("out_basis", tinv_basis);
    s.add("out_operator", tinv_op);
    write_manifest(g, "train-inverse", std::move(s));
    return 0;
  }

  if (ttop->parsed()) {
    if (ttop_clean.empty() != ttop_noisy.empty())
      throw gftse::InvalidArgument("train-topology needs both --clean and --noisy, or neither");
    ensure_out_dir(g);
    if (ttop_out.empty()) ttop_out = default_artifact(g, "topology.json");
    if (ttop_report.empty()) ttop_report = default_artifact(g, "train-topology-report.json");
    if (ttop_trace.empty()) ttop_trace = default_artifact(g, "train-topology-trace.csv");

    std::vector<gftse::Mixture> pairs;
    if (!ttop_clean.empty()) {
      gftse::Mixture pair;
      pair.clean = gftse::read_wav(ttop_clean);
      pair.noisy = gftse::read_wav(ttop_noisy);
      pairs.push_back(std::move(pair));
    } else {
      pairs = gftse::make_mixture_set(gftse::sub_seed(g.seed, "topology-pairs"),
                                      ttop_mixtures, ttop_duration, ttop_rate, ttop_snr);
    }

    gftse::TopologyPipeline pipeline;
    pipeline.frame_len = ttop_frame;
    pipeline.hop = ttop_hop;
    const gftse::GraphTopology base = gftse::build_shift_operator(ttop_n, ttop_k);
    const auto [topo, report] =
        gftse::train_topology(pairs, base, ttop_train.to_config(g.seed), pipeline);

    topo.save_json(ttop_out);
    write_text(ttop_report, report.to_json() + "\n");
    write_text(ttop_trace, report.trace_to_csv());

    Settings s;
    if (!ttop_clean.empty()) {
      s.add("clean", ttop_clean);
      s.add("noisy", ttop_noisy);
    } else {
      s.add("mixtures", ttop_mixtures);
      s.add("duration", ttop_duration);
      s.add("snr_db", ttop_snr);
      s.add("sample_rate", ttop_rate);
    }
    s.add("n", ttop_n);
    s.add("k", ttop_k);
    s.add("frame_len", ttop_frame);
    s.add("hop", ttop_hop);
    ttop_train.record(s);
    s.add("out_topology", ttop_out);
    write_manifest(g, "train-topology", std::move(s));
    return 0;
  }

  if (enh->parsed()) {
    const gftse::AudioBuffer noisy = gftse::read_wav(enh_noisy);
    const gftse::AudioBuffer clean = gftse::read_wav(enh_clean);
    const gftse::WavFormat format = parse_format(enh_format);
    gftse::TransformKind kind = gftse::parse_transform(enh_name);
    if (enh_synthesis == "learned") {
      if (kind != gftse::TransformKind::kGftSvd)
        throw gftse::InvalidArgument("learned synthesis applies to gft-svd only");
      kind = gftse::TransformKind::kGftSvdLearned;
    } else if (enh_synthesis != "exact") {
      throw gftse::InvalidArgument("unknown synthesis mode: " + enh_synthesis);
    }
    ensure_out_dir(g);
    if (enh_out.empty()) enh_out = default_artifact(g, "enhanced.wav");
    if (enh_report.empty()) enh_report = default_artifact(g, "enhance-report.json");

    gftse::EnhanceOptions options;
    options.transform = kind;
    options.frame_len = enh_framing.frame_len;
    options.hop = enh_framing.hop;
    options.pad_to = enh_framing.pad_to;

    gftse::GraphBasis basis;
    gftse::EvdBasis evd;
    gftse::FourierMatrix fourier;
    gftse::SynthesisOperator synthesis;
    if (kind == gftse::TransformKind::kGftSvd ||
        kind == gftse::TransformKind::kGftSvdLearned) {
      basis = fixed_basis(enh_p, enh_framing.pad_to);
      options.basis = &basis;
      if (kind == gftse::TransformKind::kGftSvdLearned) {
        const auto window = gftse::make_window(gftse::WindowKind::kSqrtHannCola,
                                               enh_framing.frame_len, enh_framing.hop);
        const gftse::FrameSequence frames =
            gftse::frame_signal(noisy, enh_framing.frame_len, enh_framing.hop, window,
                                enh_framing.pad_to);
        gftse::TrainConfig tc;
        tc.ridge = enh_ridge;
        synthesis = gftse::train_inverse(frames, basis, tc,
                                         gftse::InverseTrainMethod::kLeastSquares)
                        .first;
        options.synthesis = &synthesis;
      }
    } else if (kind == gftse::TransformKind::kGftEvd) {
      const std::size_t k = gftse::sparsity_to_k(enh_p, enh_framing.pad_to);
      evd = gftse::circulant_evd(gftse::build_shift_operator(enh_framing.pad_to, k));
      options.evd = &evd;
    } else {
      fourier = gftse::dft_matrix(enh_framing.pad_to);
      options.fourier = &fourier;
    }

    const auto [enhanced, report] = gftse::enhance(noisy, clean, options);
    gftse::write_wav(enh_out, enhanced, format);
    write_text(enh_report, report.to_json() + "\n");

    Settings s;
    s.add("noisy", enh_noisy);
    s.add("clean", enh_clean);
    s.add("transform", enh_name);
    s.add("synthesis", enh_synthesis);
    s.add("p", enh_p);
    s.add("ridge", enh_ridge);
    enh_framing.record(s);
    s.add("format", enh_format);
    s.add("out_wav", enh_out);
    write_manifest(g, "enhance", std::move(s));
    return 0;
  }

  if (eval->parsed()) {
    const gftse::AudioBuffer enhanced = gftse::read_wav(eval_enhanced);
    const gftse::AudioBuffer clean = gftse::read_wav(eval_clean);
    const gftse::AudioBuffer noisy = gftse::read_wav(eval_noisy);
    ensure_out_dir(g);
    if (eval_report.empty()) eval_report = default_artifact(g, "evaluate-report.json");

    const gftse::MetricsReport report = gftse::evaluate(enhanced, clean, noisy);
    write_text(eval_report, report.to_json() + "\n");

    Settings s;
    s.add("enhanced", eval_enhanced);
    s.add("clean", eval_clean);
    s.add("noisy", eval_noisy);
    write_manifest(g, "evaluate", std::move(s));
    return 0;
  }

  if (sweep->parsed()) {
    const std::vector<double> p_list = parse_double_list(sweep_p);
    std::vector<gftse::TransformKind> kinds;
    for (const std::string& name : parse_string_list(sweep_transforms))
      kinds.push_back(gftse::parse_transform(name));
    ensure_out_dir(g);
    if (sweep_csv.empty()) sweep_csv = default_artifact(g, "sweep.csv");
    if (sweep_json.empty()) sweep_json = default_artifact(g, "sweep.json");

    const auto mixtures =
        gftse::make_mixture_set(gftse::sub_seed(g.seed, "sweep-mixtures"), sweep_mixtures,
                                sweep_duration, sweep_rate, sweep_snr);
    gftse::SweepOptions options;
    options.frame_len = sweep_framing.frame_len;
    options.hop = sweep_framing.hop;
    options.pad_to = sweep_framing.pad_to;
    options.ridge = sweep_ridge;
    options.jobs = g.jobs;
    const gftse::ReportTable table =
        gftse::compare_transforms(mixtures, p_list, kinds, options);
    write_text(sweep_csv, table.to_csv());
    write_text(sweep_json, table.to_json() + "\n");

    Settings s;
    s.add("p_list", sweep_p);
    s.add("transforms", sweep_transforms);
    s.add("mixtures", sweep_mixtures);
    s.add("duration", sweep_duration);
    s.add("snr_db", sweep_snr);
    s.add("sample_rate", sweep_rate);
    s.add("ridge", sweep_ridge);
    sweep_framing.record(s);
    s.add("out_csv", sweep_csv);
    s.add("out_json", sweep_json);
    write_manifest(g, "sweep", std::move(s));
    return 0;
  }

  return 0;
}

void print_error(const char* type, const std::string& message) {
  json j;
  j["error"]["type"] = type;
  j["error"]["message"] = message;
  std::cerr << j.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const CLI::ParseError& e) {
    print_error("config", e.what());
    return kExitConfig;
  } catch (const gftse::IoError& e) {
    print_error("io", e.what());
    return kExitIo;
  } catch (const gftse::NumericError& e) {
    print_error("numeric", e.what());
    return kExitNumeric;
  } catch (const gftse::InvalidArgument& e) {
    print_error("config", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    print_error("internal", e.what());
    return 1;
  }
}
