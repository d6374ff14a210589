// Copyright 2026 The fcpsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "cli.hpp"

#include "fcpsep/align.hpp"
#include "fcpsep/io.hpp"
#include "fcpsep/losses.hpp"
#include "fcpsep/metrics.hpp"
#include "fcpsep/simkit.hpp"
#include "fcpsep/solver.hpp"
#include "fcpsep/stft.hpp"
#include "fcpsep/wav.hpp"
#include "fcpsep/wiener.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>

namespace fcpsep::cli
{

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace
{

// Collects written files so the manifest can list them with digests.
class Run
{
public:
  Run(std::string command, const CLI::App * app, fs::path out_dir)
    : command_(std::move(command)), app_(app), out_dir_(std::move(out_dir))
  {
    std::error_code ec;
    fs::create_directories(out_dir_, ec);
    if (ec) {
      throw IoError("cannot create output directory '" + out_dir_.string() + "': " + ec.message());
    }
  }

  const fs::path & dir() const { return out_dir_; }

  void text(const std::string & name, const std::function<void(std::ostream &)> & body)
  {
    write_text_file(out_dir_ / name, body);
    files_.push_back(name);
  }

  void wav(const std::string & name, const WavData & data, SampleFormat format)
  {
    write_wav(out_dir_ / name, data, format);
    files_.push_back(name);
  }

  void note(const std::string & key, json value) { extra_[key] = std::move(value); }

  void seed(std::uint64_t s) { seed_ = s; }

  // Config echo holds every option value (defaults included), which is
  // enough to rebuild the command line.
  void finish()
  {
    json config = json::object();
    json rerun = json::array({"fcpsep", command_});
    for (const CLI::Option * opt : app_->get_options()) {
      const std::string name = opt->get_single_name();
      if (name == "help" || name == "config" || opt->get_name().empty()) {
        continue;
      }
      std::vector<std::string> values = opt->results();
      if (values.empty() && !opt->get_default_str().empty()) {
        values = {opt->get_default_str()};
      }
      if (opt->get_type_size() == 0) {  // flag
        const bool on = opt->count() > 0;
        config[name] = on;
        if (on) {
          rerun.push_back("--" + name);
        }
        continue;
      }
      if (values.empty()) {
        continue;
      }
      config[name] = opt->get_expected_max() > 1 ? json(values) : json(values.front());
      for (const auto & v : values) {
        rerun.push_back("--" + name);
        rerun.push_back(v);
      }
    }
    json outputs = json::array();
    for (const auto & f : files_) {
      outputs.push_back({{"path", f}, {"fnv1a64", file_digest(out_dir_ / f)}});
    }
    json manifest = {
      {"tool", "fcpsep"},
      {"version", FCPSEP_VERSION},
      {"command", command_},
      {"seed", seed_},
      {"config", config},
      {"rerun", rerun},
      {"outputs", outputs},
    };
    for (const auto & [k, v] : extra_.items()) {
      manifest[k] = v;
    }
    write_text_file(out_dir_ / "manifest.json", [&](std::ostream & os) { os << manifest.dump(2) << '\n'; });
  }

private:
  std::string command_;
  const CLI::App * app_;
  fs::path out_dir_;
  std::vector<std::string> files_;
  std::uint64_t seed_ = 0;
  json extra_ = json::object();
};

void require_file(const fs::path & p, const std::string & what)
{
  if (!fs::is_regular_file(p)) {
    throw IoError(what + " '" + p.string() + "' does not exist");
  }
}

SampleFormat parse_format(const std::string & s)
{
  if (s == "float32") {
    return SampleFormat::Float32;
  }
  if (s == "pcm16") {
    return SampleFormat::Pcm16;
  }
  throw ConfigError("unknown sample format '" + s + "' (expected float32 or pcm16)");
}

StftConfig stft_for(int sample_rate)
{
  StftConfig cfg;
  cfg.sample_rate = sample_rate;
  return cfg;
}

std::string image_name(int speaker, int mic) { return "image_s" + std::to_string(speaker + 1) + "_m" + std::to_string(mic + 1) + ".wav"; }

WavData mono(int sample_rate, Signal s) { return WavData{sample_rate, MultiSignal{std::move(s)}}; }

Signal read_mono(const fs::path & p, int expected_rate)
{
  require_file(p, "input");
  WavData w = read_wav(p);
  require(w.channels.size() == 1, "'" + p.string() + "' must be single-channel");
  require(w.sample_rate == expected_rate, "'" + p.string() + "' has a different sample rate");
  return std::move(w.channels.front());
}

Signal fit_length(Signal s, Eigen::Index len)
{
  const Eigen::Index old = s.size();
  s.conservativeResize(len);
  if (len > old) {
    s.tail(len - old).setZero();
  }
  return s;
}

// Reference-mic images of every speaker from a simulate output directory.
MultiSignal read_truth(const fs::path & dir, int speakers, int sample_rate, Eigen::Index len)
{
  if (!fs::is_directory(dir)) {
    throw IoError("truth directory '" + dir.string() + "' does not exist");
  }
  MultiSignal refs;
  for (int c = 0; c < speakers; ++c) {
    Signal s = read_mono(dir / image_name(c, 0), sample_rate);
    require<GeometryError>(s.size() == len, "truth image length differs from the mixture");
    refs.push_back(std::move(s));
  }
  return refs;
}

void write_csv_row(std::ostream & os, const std::vector<std::string> & cells)
{
  for (std::size_t i = 0; i < cells.size(); ++i) {
    os << (i ? "," : "") << cells[i];
  }
  os << '\n';
}

std::string num(double v)
{
  std::ostringstream ss;
  ss.imbue(std::locale::classic());
  ss << std::setprecision(12) << v;
  return ss.str();
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs
{
  int speakers = 2;
  int mics = 3;
  std::uint64_t seed = 0;
  double duration = 1.0;
  int sample_rate = 8000;
  int rir_len = 256;
  double decay_ms = 20.0;
  int max_delay = 8;
  int relative_taps = 0;
  int relative_spacing = 64;
  double snr_db = 0.0;
  std::string format = "float32";
  std::string out;
};

void cmd_simulate(const SimulateArgs & a, const CLI::App * app, const CLI::Option * snr_opt)
{
  SceneParams p;
  p.speakers = a.speakers;
  p.mics = a.mics;
  p.seed = a.seed;
  p.sample_rate = a.sample_rate;
  require(a.duration > 0.0, "simulate: duration must be positive");
  p.num_samples = static_cast<int>(std::lround(a.duration * a.sample_rate));
  p.rir_len = a.rir_len;
  p.decay_ms = a.decay_ms;
  p.max_delay = a.max_delay;
  p.relative_taps = a.relative_taps;
  p.relative_spacing = a.relative_spacing;
  if (snr_opt->count() > 0) {
    p.noise_snr_db = a.snr_db;
  }
  p.validate();
  const SampleFormat format = parse_format(a.format);

  Run run("simulate", app, a.out);
  run.seed(a.seed);
  const SceneTruth truth = render(random_scene(p));
  run.wav("mixture.wav", WavData{truth.sample_rate, truth.mixtures}, format);
  for (int c = 0; c < truth.speakers(); ++c) {
    for (int m = 0; m < truth.mics(); ++m) {
      run.wav(image_name(c, m), mono(truth.sample_rate, truth.images[c][m]), format);
    }
  }
  if (p.noise_snr_db) {
    run.wav("noise.wav", WavData{truth.sample_rate, truth.noise}, format);
  }
  run.note("speakers", truth.speakers());
  run.note("mics", truth.mics());
  run.note("samples", truth.length());
  run.finish();
}

// ---------------------------------------------------------------- separate

struct SeparateArgs
{
  std::string mixture;
  int speakers = 2;
  std::string truth;
  std::string align = "none";
  std::string init = "mixture_split_random";
  int max_iters = 100;
  double tol = 1e-6;
  int past = 19;
  int future = 0;
  double ridge = 1e-6;
  double source_ridge = 1e-8;
  std::uint64_t seed = 0;
  std::string format = "float32";
  bool dump_spectrograms = false;
  std::string out;
};

void cmd_separate(const SeparateArgs & a, const CLI::App * app)
{
  require(a.align == "none" || a.align == "corr" || a.align == "oracle", "separate: --align must be none, corr or oracle");
  const bool have_truth = !a.truth.empty();
  require(a.align != "oracle" || have_truth, "separate: --align oracle needs --truth");
  AlsConfig cfg;
  cfg.init = parse_als_init(a.init);
  require(cfg.init != AlsInit::User, "separate: init 'user' is only available through the library");
  require(cfg.init != AlsInit::Oracle || have_truth, "separate: --init oracle needs --truth");
  cfg.max_iters = a.max_iters;
  cfg.tol_rel = a.tol;
  cfg.fcp.past = a.past;
  cfg.fcp.future = a.future;
  cfg.fcp.ridge = a.ridge;
  cfg.source_ridge = a.source_ridge;
  cfg.seed = a.seed;
  require(a.speakers >= 1, "separate: --C must be >= 1");
  const SampleFormat format = parse_format(a.format);

  require_file(a.mixture, "mixture");
  const WavData mix = read_wav(a.mixture);
  const int rate = mix.sample_rate;
  const Eigen::Index len = mix.channels.front().size();
  MultiSignal refs;
  if (have_truth) {
    refs = read_truth(a.truth, a.speakers, rate, len);
  }
  const StftConfig stft_cfg = stft_for(rate);
  const MultiSpectrogram mixtures = stft_all(mix.channels, stft_cfg);
  MultiSpectrogram ref_specs;
  if (have_truth) {
    ref_specs = stft_all(refs, stft_cfg);
  }
  if (cfg.init == AlsInit::Oracle) {
    cfg.init_estimates = ref_specs;
  }
  cfg.validate();

  Run run("separate", app, a.out);
  run.seed(a.seed);
  const AlsResult result = solve(mixtures, a.speakers, cfg);
  for (const auto & w : result.trace.warnings) {
    std::cerr << "warning: " << w << '\n';
  }
  MultiSpectrogram outputs = extract_reference_images(result.estimates, result.filters);
  if (a.align != "none") {
    const AlignResult aligned = a.align == "oracle" ? oracle_freq_align(outputs, ref_specs) : corr_freq_align(outputs);
    if (aligned.perm.degenerate) {
      std::cerr << "warning: correlation alignment found only constant envelopes; kept input labels\n";
    }
    outputs = aligned.aligned;
    run.text("permutation.csv", [&](std::ostream & os) { write_permutation_csv(os, aligned.perm); });
  }
  const MultiSignal estimates = istft_all(outputs, stft_cfg, static_cast<std::size_t>(len));
  for (int c = 0; c < a.speakers; ++c) {
    run.wav("estimate_s" + std::to_string(c + 1) + ".wav", mono(rate, estimates[c]), format);
  }
  run.text("trace.csv", [&](std::ostream & os) { write_trace_csv(os, result.trace); });
  run.text("trace_detail.csv", [&](std::ostream & os) { write_trace_detail_csv(os, result.trace); });
  if (have_truth) {
    const MetricReport rep = report(estimates, refs, mix.channels.front());
    run.text("metrics.csv", [&](std::ostream & os) { write_report_csv(os, rep); });
  }
  if (a.dump_spectrograms) {
    for (int c = 0; c < a.speakers; ++c) {
      run.text("estimate_s" + std::to_string(c + 1) + "_stft.csv", [&](std::ostream & os) { write_spectrogram_csv(os, outputs[c]); });
    }
  }
  run.note("iterations", result.trace.iterations);
  run.note("converged", result.trace.converged);
  run.note("filter_weighting", result.trace.weighting);
  run.note("warnings", result.trace.warnings);
  run.finish();
}

// ------------------------------------------------------------ loss-surface

struct SurfaceArgs
{
  std::string scene;
  int grid = 21;
  std::string variant = "eq4";
  int past = -1;
  int future = -1;
  bool freeze = false;
  std::string out;
};

void cmd_loss_surface(const SurfaceArgs & a, const CLI::App * app)
{
  SurfaceOptions opt;
  opt.grid = a.grid;
  opt.freeze_filters = a.freeze;
  opt.loss.variant = parse_loss_variant(a.variant);
  opt.loss.fcp = default_fcp_config(opt.loss.variant);
  if (a.past >= 0) {
    opt.loss.fcp.past = a.past;
  }
  if (a.future >= 0) {
    opt.loss.fcp.future = a.future;
  }
  opt.loss.fcp.validate();
  require(a.grid >= 2, "loss-surface: --grid must be >= 2");

  const fs::path dir(a.scene);
  require_file(dir / "mixture.wav", "mixture");
  const WavData mix = read_wav(dir / "mixture.wav");
  const Eigen::Index len = mix.channels.front().size();
  const MultiSignal refs = read_truth(dir, 2, mix.sample_rate, len);
  Signal noise = Signal::Zero(len);
  if (fs::exists(dir / "noise.wav")) {
    const WavData n = read_wav(dir / "noise.wav");
    require<GeometryError>(n.channels.front().size() == len, "noise length differs from the mixture");
    noise = n.channels.front();
  }
  const StftConfig stft_cfg = stft_for(mix.sample_rate);
  SurfaceInputs in;
  in.mixtures = stft_all(mix.channels, stft_cfg);
  in.ref_images = stft_all(refs, stft_cfg);
  in.ref_noise = stft(noise, stft_cfg);

  Run run("loss-surface", app, a.out);
  const auto points = loss_surface(in, opt);
  run.text("loss_surface.csv", [&](std::ostream & os) { write_surface_csv(os, points); });
  run.note("variant", to_string(opt.loss.variant));
  run.note("filter_past", opt.loss.fcp.past);
  run.note("filter_future", opt.loss.fcp.future);
  run.finish();
}

// --------------------------------------------------------------- loss-eval

struct LossEvalArgs
{
  std::string mixture;
  std::vector<std::string> estimates;
  std::string variant = "eq9";
  int past = -1;
  int future = -1;
  double gamma = 0.04;
  std::vector<double> alpha;
  std::string out;
};

MultiSignal read_estimates(const std::vector<std::string> & paths, int rate, Eigen::Index len)
{
  require(!paths.empty(), "at least one --estimate is required");
  MultiSignal out;
  for (const auto & p : paths) {
    out.push_back(fit_length(read_mono(p, rate), len));
  }
  return out;
}

void cmd_loss_eval(const LossEvalArgs & a, const CLI::App * app)
{
  LossConfig cfg;
  cfg.variant = parse_loss_variant(a.variant);
  cfg.fcp = default_fcp_config(cfg.variant);
  if (a.past >= 0) {
    cfg.fcp.past = a.past;
  }
  if (a.future >= 0) {
    cfg.fcp.future = a.future;
  }
  cfg.fcp.validate();
  cfg.weights.gamma = a.gamma;
  if (!a.alpha.empty()) {
    cfg.weights.alpha = Eigen::Map<const Eigen::VectorXd>(a.alpha.data(), static_cast<Eigen::Index>(a.alpha.size()));
  }

  require_file(a.mixture, "mixture");
  const WavData mix = read_wav(a.mixture);
  const Eigen::Index len = mix.channels.front().size();
  const MultiSignal est = read_estimates(a.estimates, mix.sample_rate, len);
  cfg.weights.alpha_for(static_cast<int>(mix.channels.size()));

  Run run("loss-eval", app, a.out);
  const StftConfig stft_cfg = stft_for(mix.sample_rate);
  const LossBreakdown l = combined_loss(stft_all(mix.channels, stft_cfg), stft_all(est, stft_cfg), cfg);
  run.text("loss.csv", [&](std::ostream & os) {
    os << "variant,mic,mc,isms\n";
    for (Eigen::Index p = 0; p < l.mc_per_mic.size(); ++p) {
      write_csv_row(os, {to_string(cfg.variant), std::to_string(p), num(l.mc_per_mic(p)), num(l.isms_per_mic(p))});
    }
  });
  run.note("variant", to_string(cfg.variant));
  run.note("mc_total", l.mc_total);
  run.note("isms_total", l.isms_total);
  run.note("combined", l.combined);
  std::cout << to_string(cfg.variant) << " mc=" << num(l.mc_total) << " isms=" << num(l.isms_total)
            << " combined=" << num(l.combined) << '\n';
  run.finish();
}

// ------------------------------------------------------------------ wiener

struct WienerArgs
{
  std::string mixture;
  std::vector<std::string> estimates;
  int taps = 512;
  int taps_from_k = 0;
  int future_taps = 100;
  double ridge = 0.0;
  std::vector<double> alpha;
  std::string format = "float32";
  std::string out;
};

void cmd_wiener(const WienerArgs & a, const CLI::App * app)
{
  require_file(a.mixture, "mixture");
  const WavData mix = read_wav(a.mixture);
  WienerConfig cfg;
  cfg.taps = a.taps_from_k > 0 ? taps_from_stft_filter(a.taps_from_k, 8, 32, mix.sample_rate) : a.taps;
  cfg.future_taps = a.future_taps;
  cfg.ridge = a.ridge;
  cfg.validate();
  const SampleFormat format = parse_format(a.format);
  const Eigen::Index len = mix.channels.front().size();
  const MultiSignal est = read_estimates(a.estimates, mix.sample_rate, len);
  Eigen::VectorXd alpha;
  if (!a.alpha.empty()) {
    alpha = Eigen::Map<const Eigen::VectorXd>(a.alpha.data(), static_cast<Eigen::Index>(a.alpha.size()));
  }

  Run run("wiener", app, a.out);
  const IrasResult r = iras(mix.channels, est, cfg, alpha);
  run.text("iras.csv", [&](std::ostream & os) {
    os << "mic,loss\n";
    for (Eigen::Index p = 0; p < r.per_mic.size(); ++p) {
      write_csv_row(os, {std::to_string(p), num(r.per_mic(p))});
    }
  });
  for (std::size_t c = 0; c < est.size(); ++c) {
    run.wav("filtered_s" + std::to_string(c + 1) + "_m1.wav", mono(mix.sample_rate, r.images[0][c]), format);
  }
  run.note("taps", cfg.taps);
  run.note("future_taps", cfg.future_taps);
  run.note("iras_loss", r.loss);
  run.finish();
}

// ----------------------------------------------------------------- metrics

struct MetricsArgs
{
  std::vector<std::string> estimates;
  std::vector<std::string> references;
  std::string mixture;
  std::string out;
};

void cmd_metrics(const MetricsArgs & a, const CLI::App * app)
{
  require(a.estimates.size() == a.references.size(), "metrics: one --estimate per --reference");
  require_file(a.mixture, "mixture");
  const WavData mix = read_wav(a.mixture);
  const Eigen::Index len = mix.channels.front().size();
  MultiSignal refs;
  for (const auto & p : a.references) {
    refs.push_back(read_mono(p, mix.sample_rate));
    require<GeometryError>(refs.back().size() == len, "metrics: reference length differs from the mixture");
  }
  const MultiSignal est = read_estimates(a.estimates, mix.sample_rate, len);

  Run run("metrics", app, a.out);
  const MetricReport rep = report(est, refs, mix.channels.front());
  run.text("metrics.csv", [&](std::ostream & os) { write_report_csv(os, rep); });
  run.note("permutation", rep.perm);
  run.finish();
}

// ------------------------------------------------------------------- align

struct AlignArgs
{
  std::vector<std::string> estimates;
  std::vector<std::string> references;
  std::string method = "corr";
  int max_sweeps = 10;
  std::string format = "float32";
  std::string out;
};

void cmd_align(const AlignArgs & a, const CLI::App * app)
{
  require(a.method == "corr" || a.method == "oracle", "align: --method must be corr or oracle");
  require(a.method != "oracle" || !a.references.empty(), "align: --method oracle needs --reference");
  require(a.estimates.size() >= 2, "align: at least two --estimate files");
  const SampleFormat format = parse_format(a.format);
  require_file(a.estimates.front(), "estimate");
  const WavData first = read_wav(a.estimates.front());
  const int rate = first.sample_rate;
  const Eigen::Index len = first.channels.front().size();
  MultiSignal est;
  for (const auto & p : a.estimates) {
    est.push_back(read_mono(p, rate));
    require<GeometryError>(est.back().size() == len, "align: estimates differ in length");
  }
  MultiSignal refs;
  for (const auto & p : a.references) {
    refs.push_back(fit_length(read_mono(p, rate), len));
  }

  Run run("align", app, a.out);
  const StftConfig stft_cfg = stft_for(rate);
  CorrAlignOptions opt;
  opt.max_sweeps = a.max_sweeps;
  const AlignResult r = a.method == "oracle" ? oracle_freq_align(stft_all(est, stft_cfg), stft_all(refs, stft_cfg))
                                             : corr_freq_align(stft_all(est, stft_cfg), opt);
  if (r.perm.degenerate) {
    std::cerr << "warning: correlation alignment found only constant envelopes; kept input labels\n";
  }
  run.text("permutation.csv", [&](std::ostream & os) { write_permutation_csv(os, r.perm); });
  const MultiSignal aligned = istft_all(r.aligned, stft_cfg, static_cast<std::size_t>(len));
  for (std::size_t c = 0; c < aligned.size(); ++c) {
    run.wav("aligned_s" + std::to_string(c + 1) + ".wav", mono(rate, aligned[c]), format);
  }
  run.note("degenerate", r.perm.degenerate);
  run.finish();
}

int exit_code_for(const std::exception & e)
{
  if (dynamic_cast<const ConfigError *>(&e) != nullptr) {
    return 1;
  }
  if (dynamic_cast<const IoError *>(&e) != nullptr) {
    return 2;
  }
  return 3;
}

}  // namespace

int run(int argc, const char * const * argv)
{
  CLI::App app{"Multi-microphone speech separation toolkit built on mixture-consistency losses"};
  app.set_config("--config", "", "INI file with one [section] per command; command-line values win");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(FCPSEP_VERSION));

  SimulateArgs sim;
  CLI::App * simulate = app.add_subcommand("simulate", "Render a random multi-microphone scene");
  simulate->add_option("--C,--speakers", sim.speakers, "Number of speakers")->capture_default_str();
  simulate->add_option("--P,--mics", sim.mics, "Number of microphones")->capture_default_str();
  simulate->add_option("--seed", sim.seed, "Root seed")->capture_default_str();
  simulate->add_option("--duration", sim.duration, "Dry source length in seconds")->capture_default_str();
  simulate->add_option("--sample-rate", sim.sample_rate, "Sample rate in Hz")->capture_default_str();
  simulate->add_option("--rir-len", sim.rir_len, "RIR length in samples")->capture_default_str();
  simulate->add_option("--decay-ms", sim.decay_ms, "Tail decay: 20 dB per decay-ms")->capture_default_str();
  simulate->add_option("--max-delay", sim.max_delay, "Largest direct-path delay in samples")->capture_default_str();
  simulate->add_option("--relative-taps", sim.relative_taps, "Exact sub-band relative filters with this many taps (0: off)")
    ->capture_default_str();
  simulate->add_option("--relative-spacing", sim.relative_spacing, "Spacing of relative taps in samples")->capture_default_str();
  const CLI::Option * snr_opt = simulate->add_option("--snr", sim.snr_db, "Per-microphone SNR in dB (default: noiseless)");
  simulate->add_option("--format", sim.format, "float32 or pcm16")->capture_default_str();
  simulate->add_option("--out", sim.out, "Output directory")->required();

  SeparateArgs sep;
  CLI::App * separate = app.add_subcommand("separate", "Blind separation by alternating least squares");
  separate->add_option("--mixture", sep.mixture, "Multi-channel mixture WAV (channel 1 is the reference)")->required();
  separate->add_option("--C,--speakers", sep.speakers, "Number of speakers")->capture_default_str();
  separate->add_option("--truth", sep.truth, "simulate output directory, for oracle init/alignment and metrics");
  separate->add_option("--align", sep.align, "none, corr or oracle")->capture_default_str();
  separate->add_option("--init", sep.init, "mixture_split_random or oracle")->capture_default_str();
  separate->add_option("--max-iters", sep.max_iters, "Iteration limit")->capture_default_str();
  separate->add_option("--tol", sep.tol, "Stop when one iteration lowers the objective by less than tol * mixture energy")
    ->capture_default_str();
  separate->add_option("--past", sep.past, "Past filter taps")->capture_default_str();
  separate->add_option("--future", sep.future, "Future filter taps")->capture_default_str();
  separate->add_option("--ridge", sep.ridge, "Filter ridge relative to reference-bin energy")->capture_default_str();
  separate->add_option("--source-ridge", sep.source_ridge, "Ridge on the source estimates")->capture_default_str();
  separate->add_option("--seed", sep.seed, "Seed of the random initialization")->capture_default_str();
  separate->add_option("--format", sep.format, "float32 or pcm16")->capture_default_str();
  separate->add_flag("--dump-spectrograms", sep.dump_spectrograms, "Also write estimate STFTs as CSV");
  separate->add_option("--out", sep.out, "Output directory")->required();

  SurfaceArgs surf;
  CLI::App * surface = app.add_subcommand("loss-surface", "Mixture-consistency loss over hypothesised two-speaker outputs");
  surface->add_option("--scene", surf.scene, "simulate output directory with two speakers")->required();
  surface->add_option("--grid", surf.grid, "Grid points per axis")->capture_default_str();
  surface->add_option("--variant", surf.variant, "eq4 (reference unfiltered) or eq9 (all filtered)")->capture_default_str();
  surface->add_option("--past", surf.past, "Past filter taps (default: per variant)");
  surface->add_option("--future", surf.future, "Future filter taps (default: per variant)");
  surface->add_flag("--freeze", surf.freeze, "Estimate filters once at (1, 0)");
  surface->add_option("--out", surf.out, "Output directory")->required();

  LossEvalArgs le;
  CLI::App * loss_eval = app.add_subcommand("loss-eval", "Evaluate the consistency and scattering losses");
  loss_eval->add_option("--mixture", le.mixture, "Multi-channel mixture WAV")->required();
  loss_eval->add_option("--estimate", le.estimates, "Speaker estimate WAV (repeat per speaker)")->required();
  loss_eval->add_option("--variant", le.variant, "eq4 or eq9")->capture_default_str();
  loss_eval->add_option("--past", le.past, "Past filter taps (default: per variant)");
  loss_eval->add_option("--future", le.future, "Future filter taps (default: per variant)");
  loss_eval->add_option("--gamma", le.gamma, "Weight of the scattering term")->capture_default_str();
  loss_eval->add_option("--alpha", le.alpha, "Per-microphone weights");
  loss_eval->add_option("--out", le.out, "Output directory")->required();

  WienerArgs wi;
  CLI::App * wiener = app.add_subcommand("wiener", "Time-domain Wiener filtering and the iRAS loss");
  wiener->add_option("--mixture", wi.mixture, "Multi-channel mixture WAV")->required();
  wiener->add_option("--estimate", wi.estimates, "Speaker estimate WAV (repeat per speaker)")->required();
  wiener->add_option("--taps", wi.taps, "Filter taps")->capture_default_str();
  wiener->add_option("--taps-from-K", wi.taps_from_k, "Use the time span of a K-tap sub-band filter");
  wiener->add_option("--future-taps", wi.future_taps, "Look-ahead taps")->capture_default_str();
  wiener->add_option("--ridge", wi.ridge, "Diagonal loading relative to trace / taps")->capture_default_str();
  wiener->add_option("--alpha", wi.alpha, "Per-microphone weights");
  wiener->add_option("--format", wi.format, "float32 or pcm16")->capture_default_str();
  wiener->add_option("--out", wi.out, "Output directory")->required();

  MetricsArgs me;
  CLI::App * metrics = app.add_subcommand("metrics", "SI-SDR and SNR with PIT assignment");
  metrics->add_option("--estimate", me.estimates, "Estimate WAV (repeat)")->required();
  metrics->add_option("--reference", me.references, "Reference WAV (repeat)")->required();
  metrics->add_option("--mixture", me.mixture, "Mixture WAV; channel 1 is the baseline")->required();
  metrics->add_option("--out", me.out, "Output directory")->required();

  AlignArgs al;
  CLI::App * align = app.add_subcommand("align", "Repair frequency permutations of separated outputs");
  align->add_option("--estimate", al.estimates, "Estimate WAV (repeat)")->required();
  align->add_option("--reference", al.references, "Reference WAV (repeat), for --method oracle");
  align->add_option("--method", al.method, "corr or oracle")->capture_default_str();
  align->add_option("--max-sweeps", al.max_sweeps, "Refinement sweeps for corr")->capture_default_str();
  align->add_option("--format", al.format, "float32 or pcm16")->capture_default_str();
  align->add_option("--out", al.out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (simulate->parsed()) {
      cmd_simulate(sim, simulate, snr_opt);
    } else if (separate->parsed()) {
      cmd_separate(sep, separate);
    } else if (surface->parsed()) {
      cmd_loss_surface(surf, surface);
    } else if (loss_eval->parsed()) {
      cmd_loss_eval(le, loss_eval);
    } else if (wiener->parsed()) {
      cmd_wiener(wi, wiener);
    } else if (metrics->parsed()) {
      cmd_metrics(me, metrics);
    } else if (align->parsed()) {
      cmd_align(al, align);
    }
  } catch (const std::exception & e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return 0;
}

int run(const std::vector<std::string> & args)
{
  std::vector<const char *> argv{"fcpsep"};
  for (const auto & a : args) {
    argv.push_back(a.c_str());
  }
  return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace fcpsep::cli
