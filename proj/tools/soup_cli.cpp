// Experiment runner for the SOUP dictionary-learning library: data
// ingestion, learning and reconstruction protocols, benchmark timing, and
// CSV outputs. Exit codes: 0 success, 1 usage error, 2 runtime error.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "soup/baselines.hpp"
#include "soup/io.hpp"
#include "soup/metrics.hpp"
#include "soup/recon.hpp"
#include "soup/rng.hpp"
#include "soup/sensing.hpp"
#include "soup/soup_learn.hpp"
#include "soup/version.hpp"

namespace fs = std::filesystem;
using namespace soup;

namespace {

class Stopwatch {
 public:
  void start() { t0_ = std::chrono::steady_clock::now(); }
  double stop() {
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0_).count();
  }

 private:
  std::chrono::steady_clock::time_point t0_;
};

using KeyValues = std::vector<std::pair<std::string, std::string>>;

std::string out_path(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

void prepare_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
}

// The manifest echoes every resolved option in config-file syntax, so it can
// be fed back through --config to rerun the experiment. Timings and other
// non-reproducible values live in comment lines.
void write_manifest(const std::string& dir, const std::string& command, const KeyValues& config,
                    const KeyValues& comments) {
  const std::string path = out_path(dir, "manifest.txt");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write manifest " + path);
  os << "# soupdl " << kVersion << " manifest\n";
  os << "# command: " << command << "\n";
  for (const auto& [k, v] : comments) os << "# " << k << ": " << v << "\n";
  for (const auto& [k, v] : config) os << command << "." << k << "=" << v << "\n";
  if (!os) throw IoError("manifest write failed: " + path);
}

std::string fmt(double v) { return format_double(v); }
std::string fmt(std::size_t v) { return std::to_string(v); }

std::vector<Image> read_images(const std::vector<std::string>& paths) {
  if (paths.empty()) throw ParameterError("at least one input image is required");
  std::vector<Image> images;
  images.reserve(paths.size());
  for (const auto& p : paths) images.push_back(read_any_image(p));
  return images;
}

// Random in-bounds patches from a set of images, vectorized column-major
// within each patch (the library-wide convention).
DenseMatrix sample_patches(const std::vector<Image>& images, std::size_t side, std::size_t count,
                           std::uint64_t seed) {
  for (const Image& img : images) {
    if (img.height < side || img.width < side)
      throw ParameterError("an input image is smaller than the patch size");
  }
  DenseMatrix y(side * side, count);
  Rng rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    const Image& img = images[rng.below(images.size())];
    const std::size_t r0 = rng.below(img.height - side + 1);
    const std::size_t c0 = rng.below(img.width - side + 1);
    auto col = y.col(i);
    for (std::size_t pc = 0; pc < side; ++pc) {
      for (std::size_t pr = 0; pr < side; ++pr) col[pc * side + pr] = img.at(r0 + pr, c0 + pc);
    }
  }
  return y;
}

// ---------------------------------------------------------------------------
// learn

struct LearnOptions {
  std::vector<std::string> images;
  std::string out;
  std::size_t patch_side = 8;
  std::size_t num_patches = 30000;
  std::size_t atoms = 256;
  std::string method = "l0";
  double lambda = 69.0;
  double mu = 615.0;
  double cap = 1e8;
  std::size_t iters = 30;
  std::string order = "cyclic";
  std::uint64_t seed = 0;
};

int run_learn(const LearnOptions& opt) {
  Stopwatch watch;
  watch.start();
  const std::vector<Image> images = read_images(opt.images);
  const DenseMatrix y = sample_patches(images, opt.patch_side, opt.num_patches, opt.seed);
  const double load_s = watch.stop();

  LearnConfig cfg;
  cfg.num_atoms = opt.atoms;
  cfg.iterations = opt.iters;
  cfg.atom_order = opt.order == "random" ? AtomOrder::kSeededRandom : AtomOrder::kCyclic;
  cfg.order_seed = opt.seed;
  const bool is_l0 = opt.method == "l0";
  if (is_l0) {
    cfg.penalty = L0CodeParams(opt.lambda, opt.cap);
  } else {
    cfg.penalty = L1CodeParams(opt.mu);
  }

  LearnState state = initial_learn_state(y.rows(), opt.atoms, y.cols());
  // Fails fast (cleanly) on degenerate data for which NSRE is undefined.
  nsre(y, state.dictionary, state.coefs);

  watch.start();
  state = is_l0 ? soup_dillo(y, std::move(state), cfg) : os_dl(y, std::move(state), cfg);
  const double learn_s = watch.stop();

  watch.start();
  prepare_out_dir(opt.out);
  write_dictionary(out_path(opt.out, "dictionary.sdic"), state.dictionary);
  write_coefs(out_path(opt.out, "coefs.scoe"), state.coefs);

  const double y_frob = frobenius(y);
  const double denom = static_cast<double>(y.rows()) * static_cast<double>(y.cols());
  CsvWriter trace(out_path(opt.out, "trace.csv"),
                  {"iter", "objective", "nsre_pct", "sparsity_pct", "nnz", "dict_diff", "coef_diff"});
  for (std::size_t t = 1; t < state.objective_trace.size(); ++t) {
    trace.row({static_cast<double>(t), state.objective_trace[t],
               100.0 * state.fit_frob_trace[t] / y_frob,
               100.0 * static_cast<double>(state.nnz_trace[t]) / denom,
               static_cast<double>(state.nnz_trace[t]), state.dict_diff_trace[t - 1],
               state.coef_diff_trace[t - 1]});
  }
  trace.close();
  const double write_s = watch.stop();

  KeyValues config;
  for (const auto& p : opt.images) config.emplace_back("images", p);
  config.emplace_back("out", opt.out);
  config.emplace_back("patch-side", fmt(opt.patch_side));
  config.emplace_back("num-patches", fmt(opt.num_patches));
  config.emplace_back("atoms", fmt(opt.atoms));
  config.emplace_back("method", opt.method);
  config.emplace_back("lambda", fmt(opt.lambda));
  config.emplace_back("mu", fmt(opt.mu));
  config.emplace_back("cap", fmt(opt.cap));
  config.emplace_back("iters", fmt(opt.iters));
  config.emplace_back("order", opt.order);
  config.emplace_back("seed", fmt(opt.seed));
  write_manifest(opt.out, "learn", config,
                 {{"wall-clock", "load=" + fmt(load_s) + "s learn=" + fmt(learn_s) +
                                     "s write=" + fmt(write_s) + "s"},
                  {"metric rows", fmt(opt.iters) + " (trace.csv)"},
                  {"initial objective", fmt(state.objective_trace.front())},
                  {"final nsre_pct", fmt(100.0 * state.fit_frob_trace.back() / y_frob)},
                  {"nonunique coding events", fmt(state.nonunique_code_events)}});
  std::cout << "learn: " << opt.iters << " iterations, final NSRE "
            << 100.0 * state.fit_frob_trace.back() / y_frob << "%, sparsity "
            << 100.0 * static_cast<double>(state.nnz_trace.back()) / denom << "% -> " << opt.out
            << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateOptions {
  std::string image;
  std::string out;
  std::string scheme = "cartesian";
  double factor = 2.5;
  std::uint64_t seed = 0;
  double center_fraction = 0.04;
  double noise_sigma = 0.0;
};

int run_simulate(const SimulateOptions& opt) {
  Image reference = read_any_image(opt.image);
  const double peak = peak_magnitude(reference);
  if (peak == 0.0) throw NumericError("simulate: input image is identically zero");
  for (auto& v : reference.pixels) v /= peak;

  const SamplingScheme scheme =
      opt.scheme == "random2d" ? SamplingScheme::kRandom2D : SamplingScheme::kCartesian1D;
  const SamplingMask mask =
      make_mask(reference.height, reference.width, scheme, opt.factor, opt.seed, opt.center_fraction);
  const FourierSamplingOp op(mask);
  CVector z = op.forward(reference);
  if (opt.noise_sigma > 0.0) {
    Rng noise_rng(opt.seed + 0x9e3779b97f4a7c15ull);
    for (auto& v : z) v += opt.noise_sigma * noise_rng.cgaussian();
  }

  prepare_out_dir(opt.out);
  write_mask(out_path(opt.out, "mask.smask"), mask);
  write_kspace(out_path(opt.out, "kspace.sksp"), mask.height, mask.width, z);
  write_image(out_path(opt.out, "reference.simg"), reference);

  KeyValues config{{"image", opt.image},
                   {"out", opt.out},
                   {"scheme", opt.scheme},
                   {"factor", fmt(opt.factor)},
                   {"seed", fmt(opt.seed)},
                   {"center-fraction", fmt(opt.center_fraction)},
                   {"noise-sigma", fmt(opt.noise_sigma)}};
  write_manifest(opt.out, "simulate", config,
                 {{"kept", fmt(mask.kept_count())},
                  {"achieved factor", fmt(mask.achieved_factor())}});
  std::cout << "simulate: kept " << mask.kept_count() << "/" << mask.height * mask.width
            << " samples (factor " << mask.achieved_factor() << ") -> " << opt.out << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// recon

struct ReconOptions {
  std::string kspace;
  std::string mask;
  std::string out;
  std::string ref;
  std::string method = "l0";
  std::size_t patch_side = 6;
  std::size_t atoms = 144;
  std::size_t outer = 45;
  std::size_t inner = 0;      // 0 = method default (5 for l0, 1 for l1)
  double nu = 0.0;            // 0 = nu_scale / pixel count
  double nu_scale = 1e6;
  double weight_first = 0.0;  // 0 = method default
  double weight_last = 0.0;
  double cap = 1e8;
  std::string solver = "fourier";
  double cg_tol = 1e-10;
  std::size_t cg_iters = 200;
};

int run_recon(const ReconOptions& opt) {
  const SamplingMask mask = read_mask(opt.mask);
  const KspaceData data = read_kspace(opt.kspace);
  if (data.height != mask.height || data.width != mask.width)
    throw IoError("recon: mask grid " + std::to_string(mask.height) + "x" +
                  std::to_string(mask.width) + " does not match measurement grid " +
                  std::to_string(data.height) + "x" + std::to_string(data.width));
  const FourierSamplingOp op(mask);
  if (data.samples.size() != op.measurement_count())
    throw IoError("recon: measurement count " + std::to_string(data.samples.size()) +
                  " does not match mask kept count " + std::to_string(op.measurement_count()));

  Image reference;
  const bool have_ref = !opt.ref.empty();
  if (have_ref) reference = read_any_image(opt.ref);

  const bool is_l0 = opt.method == "l0";
  ReconConfig cfg;
  cfg.geom = PatchGeometry{mask.height, mask.width, opt.patch_side, 1, true};
  cfg.num_atoms = opt.atoms;
  cfg.outer_iters = opt.outer;
  cfg.inner_learn_iters = opt.inner > 0 ? opt.inner : (is_l0 ? 5 : 1);
  cfg.nu = opt.nu > 0.0 ? opt.nu : opt.nu_scale / static_cast<double>(mask.height * mask.width);
  cfg.cap = opt.cap;
  cfg.solver = opt.solver == "cg" ? ImageSolver::kConjugateGradient : ImageSolver::kFourierClosedForm;
  cfg.cg_tol = opt.cg_tol;
  cfg.cg_max_iters = opt.cg_iters;
  double first = opt.weight_first > 0.0 ? opt.weight_first : 0.35;
  double last = opt.weight_last > 0.0 ? opt.weight_last : 0.01;
  if (!is_l0 && opt.weight_first <= 0.0) first /= 1.4;
  if (!is_l0 && opt.weight_last <= 0.0) last /= 1.4;
  cfg.weight_schedule = linear_schedule(first, last, opt.outer);

  Stopwatch watch;
  watch.start();
  ReconState state = initial_recon_state(op, data.samples, cfg.geom, opt.atoms);
  const Image zero_filled = state.image;
  state = is_l0 ? soup_dillo_mri(data.samples, op, std::move(state), cfg,
                                 have_ref ? &reference : nullptr)
                : soup_dilli_mri(data.samples, op, std::move(state), cfg,
                                 have_ref ? &reference : nullptr);
  const double recon_s = watch.stop();

  prepare_out_dir(opt.out);
  write_image(out_path(opt.out, "recon.simg"), state.image);
  write_pgm(out_path(opt.out, "recon.pgm"), state.image);
  write_dictionary(out_path(opt.out, "dictionary.sdic"), state.learn.dictionary);
  write_coefs(out_path(opt.out, "coefs.scoe"), state.learn.coefs);

  std::vector<std::string> header{"iter", "objective", "image_diff"};
  if (have_ref) header.push_back("psnr_db");
  CsvWriter trace(out_path(opt.out, "trace.csv"), header);
  for (std::size_t t = 1; t < state.objective_trace.size(); ++t) {
    std::vector<double> row{static_cast<double>(t), state.objective_trace[t],
                            state.image_diff_trace[t - 1]};
    if (have_ref) row.push_back(state.psnr_trace[t]);
    trace.row(row);
  }
  trace.close();

  KeyValues config{{"kspace", opt.kspace},
                   {"mask", opt.mask},
                   {"out", opt.out},
                   {"ref", opt.ref},
                   {"method", opt.method},
                   {"patch-side", fmt(opt.patch_side)},
                   {"atoms", fmt(opt.atoms)},
                   {"outer", fmt(opt.outer)},
                   {"inner", fmt(cfg.inner_learn_iters)},
                   {"nu", fmt(cfg.nu)},
                   {"weight-first", fmt(first)},
                   {"weight-last", fmt(last)},
                   {"cap", fmt(opt.cap)},
                   {"solver", opt.solver},
                   {"cg-tol", fmt(opt.cg_tol)},
                   {"cg-iters", fmt(opt.cg_iters)}};
  KeyValues comments{{"wall-clock", "recon=" + fmt(recon_s) + "s"},
                     {"metric rows", fmt(opt.outer) + " (trace.csv)"}};
  if (have_ref) {
    comments.emplace_back("zero-filled psnr_db", fmt(psnr(zero_filled, reference)));
    comments.emplace_back("final psnr_db", fmt(state.psnr_trace.back()));
  }
  write_manifest(opt.out, "recon", config, comments);

  std::cout << "recon: " << opt.outer << " outer iterations";
  if (have_ref) std::cout << ", PSNR " << state.psnr_trace.back() << " dB";
  std::cout << " -> " << opt.out << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// code

struct CodeOptions {
  std::string dict;
  std::vector<std::string> images;
  std::string out;
  std::size_t num_patches = 30000;
  std::uint64_t seed = 0;
  std::string method = "omp";
  std::size_t sparsity = 3;
  double err_tol = 1e-6;
  double lambda = 69.0;
  double cap = 1e8;
  std::size_t sweeps = 60;
};

int run_code(const CodeOptions& opt) {
  const DenseMatrix dict = read_dictionary(opt.dict);
  const auto side = static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(dict.rows()))));
  if (side * side != dict.rows())
    throw ParameterError("code: dictionary signal dimension is not a square patch size");
  const std::vector<Image> images = read_images(opt.images);
  const DenseMatrix y = sample_patches(images, side, opt.num_patches, opt.seed);

  prepare_out_dir(opt.out);
  CoefMatrix coefs;
  Stopwatch watch;
  watch.start();
  if (opt.method == "omp") {
    coefs = omp_code_all(dict, y, OmpParams{opt.sparsity, opt.err_tol});
  } else if (opt.method == "l0bcd") {
    LearnConfig cfg;
    cfg.num_atoms = dict.cols();
    cfg.penalty = L0CodeParams(opt.lambda, opt.cap);
    cfg.iterations = opt.sweeps;
    cfg.update_atoms = false;
    LearnState state;
    state.dictionary = dict;
    state.coefs = CoefMatrix(y.cols(), dict.cols());
    state = soup_dillo(y, std::move(state), cfg);

    const double y_frob = frobenius(y);
    const double denom = static_cast<double>(y.rows()) * static_cast<double>(y.cols());
    CsvWriter trace(out_path(opt.out, "trace.csv"),
                    {"iter", "objective", "nsre_pct", "sparsity_pct"});
    for (std::size_t t = 1; t < state.objective_trace.size(); ++t) {
      trace.row({static_cast<double>(t), state.objective_trace[t],
                 100.0 * state.fit_frob_trace[t] / y_frob,
                 100.0 * static_cast<double>(state.nnz_trace[t]) / denom});
    }
    trace.close();
    coefs = state.coefs;
  } else {
    throw ParameterError("code: unknown method " + opt.method);
  }
  const double code_s = watch.stop();

  write_coefs(out_path(opt.out, "coefs.scoe"), coefs);
  MetricReport report;
  report.nsre_pct = 100.0 * nsre(y, dict, coefs);
  report.sparsity_pct = 100.0 * sparsity_factor(coefs, y.rows());
  report.objective = fit_frobenius_sq(y, dict, coefs);
  CsvWriter metrics_csv(out_path(opt.out, "metrics.csv"),
                        {"nsre_pct", "sparsity_pct", "objective"});
  metrics_csv.row({report.nsre_pct, report.sparsity_pct, report.objective});
  metrics_csv.close();

  KeyValues config;
  config.emplace_back("dict", opt.dict);
  for (const auto& p : opt.images) config.emplace_back("images", p);
  config.emplace_back("out", opt.out);
  config.emplace_back("num-patches", fmt(opt.num_patches));
  config.emplace_back("seed", fmt(opt.seed));
  config.emplace_back("method", opt.method);
  config.emplace_back("sparsity", fmt(opt.sparsity));
  config.emplace_back("err-tol", fmt(opt.err_tol));
  config.emplace_back("lambda", fmt(opt.lambda));
  config.emplace_back("cap", fmt(opt.cap));
  config.emplace_back("sweeps", fmt(opt.sweeps));
  write_manifest(opt.out, "code", config,
                 {{"wall-clock", "code=" + fmt(code_s) + "s"},
                  {"nsre_pct", fmt(report.nsre_pct)},
                  {"sparsity_pct", fmt(report.sparsity_pct)}});
  std::cout << "code: NSRE " << report.nsre_pct << "%, sparsity " << report.sparsity_pct
            << "% -> " << opt.out << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// bench

struct BenchOptions {
  std::string out;
  std::size_t n = 36;
  std::size_t n0 = 5000;
  std::size_t atoms0 = 72;
  std::size_t iters = 3;
  std::uint64_t seed = 0;
  double lambda = 0.25;
};

// Signals planted as sparse combinations of reference atoms, so the timed
// runs code realistic supports.
DenseMatrix planted_signals(std::size_t n, std::size_t count, std::size_t atoms,
                            std::uint64_t seed) {
  const DenseMatrix dict = odct_dictionary(n, atoms);
  DenseMatrix y(n, count);
  Rng rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    auto col = y.col(i);
    for (int pick = 0; pick < 4; ++pick) {
      const std::size_t j = rng.below(atoms);
      const Complex c = rng.uniform(0.5, 1.5) * phase_unit(rng.cgaussian());
      const auto atom = dict.col(j);
      for (std::size_t r = 0; r < n; ++r) col[r] += atom[r] * c;
    }
    for (std::size_t r = 0; r < n; ++r) col[r] += 0.01 * rng.cgaussian();
  }
  return y;
}

int run_bench(const BenchOptions& opt) {
  struct Case {
    std::string label;
    std::size_t signals;
    std::size_t atoms;
  };
  const std::vector<Case> cases{{"base", opt.n0, opt.atoms0},
                                {"2N", 2 * opt.n0, opt.atoms0},
                                {"4N", 4 * opt.n0, opt.atoms0},
                                {"2J", opt.n0, 2 * opt.atoms0}};

  prepare_out_dir(opt.out);
  std::ostringstream csv;
  csv << "case,signals,atoms,sec_per_iter,ratio_vs_base\n";
  double base_time = 0.0;
  std::cout << "bench: n=" << opt.n << " lambda=" << opt.lambda << "\n";
  for (const Case& c : cases) {
    const DenseMatrix y = planted_signals(opt.n, c.signals, opt.atoms0, opt.seed);

    LearnConfig cfg;
    cfg.num_atoms = c.atoms;
    cfg.penalty = L0CodeParams(opt.lambda, 1e8);
    cfg.iterations = 1;
    LearnState state = initial_learn_state(opt.n, c.atoms, c.signals);
    state = soup_dillo(y, std::move(state), cfg);  // warmup iteration

    cfg.iterations = opt.iters;
    Stopwatch watch;
    watch.start();
    state = soup_dillo(y, std::move(state), cfg);
    const double per_iter = watch.stop() / static_cast<double>(opt.iters);
    if (c.label == "base") base_time = per_iter;
    const double ratio = per_iter / base_time;
    csv << c.label << "," << c.signals << "," << c.atoms << "," << format_double(per_iter) << ","
        << format_double(ratio) << "\n";
    std::cout << "  " << c.label << ": N=" << c.signals << " J=" << c.atoms << " "
              << per_iter << " s/iter (x" << ratio << ")\n";
  }

  const std::string csv_path = out_path(opt.out, "timing.csv");
  std::ofstream os(csv_path, std::ios::binary);
  if (!os) throw IoError("cannot write " + csv_path);
  os << csv.str();
  os.close();

  KeyValues config{{"out", opt.out},     {"n", fmt(opt.n)},       {"n0", fmt(opt.n0)},
                   {"atoms0", fmt(opt.atoms0)}, {"iters", fmt(opt.iters)}, {"seed", fmt(opt.seed)},
                   {"lambda", fmt(opt.lambda)}};
  write_manifest(opt.out, "bench", config, {});
  return 0;
}

// ---------------------------------------------------------------------------
// metrics

struct MetricsOptions {
  std::string recon;
  std::string ref;
  std::string dict;
  std::string coefs;
  std::string image;
  std::size_t patch_side = 6;
  std::size_t stride = 1;
  bool no_wrap = false;
  std::string out;
};

int run_metrics(const MetricsOptions& opt) {
  KeyValues results;

  if (!opt.recon.empty() || !opt.ref.empty()) {
    if (opt.recon.empty() || opt.ref.empty())
      throw ParameterError("metrics: --recon and --ref must be given together");
    const Image recon_img = read_any_image(opt.recon);
    const Image ref_img = read_any_image(opt.ref);
    results.emplace_back("psnr_db", fmt(psnr(recon_img, ref_img)));
  }

  if (!opt.dict.empty() || !opt.coefs.empty()) {
    if (opt.dict.empty() || opt.coefs.empty())
      throw ParameterError("metrics: --dict and --coefs must be given together");
    const DenseMatrix dict = read_dictionary(opt.dict);
    const CoefMatrix coefs = read_coefs(opt.coefs);
    results.emplace_back("sparsity_pct", fmt(100.0 * sparsity_factor(coefs, dict.rows())));
    if (!opt.image.empty()) {
      const Image img = read_any_image(opt.image);
      const PatchGeometry geom{img.height, img.width, opt.patch_side, opt.stride, !opt.no_wrap};
      const DenseMatrix y = extract_patches(img, geom);
      if (y.cols() != coefs.signal_count())
        throw ParameterError("metrics: coefficient count does not match the image's patch grid");
      results.emplace_back("nsre_pct", fmt(100.0 * nsre(y, dict, coefs)));
    }
  }

  if (results.empty())
    throw ParameterError("metrics: nothing to compute (pass --recon/--ref or --dict/--coefs)");

  for (const auto& [k, v] : results) std::cout << k << "=" << v << "\n";
  if (!opt.out.empty()) {
    std::ofstream os(opt.out, std::ios::binary);
    if (!os) throw IoError("cannot write " + opt.out);
    for (std::size_t i = 0; i < results.size(); ++i) os << (i ? "," : "") << results[i].first;
    os << "\n";
    for (std::size_t i = 0; i < results.size(); ++i) os << (i ? "," : "") << results[i].second;
    os << "\n";
  }
  return 0;
}

void check_thread_env() {
  const char* env = std::getenv("SOUP_THREADS");
  if (env == nullptr) return;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || v < 1)
    throw ParameterError("SOUP_THREADS must be a positive integer");
  // This build executes single-threaded, so any positive cap is honored.
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sum-of-outer-products dictionary learning and dictionary-blind "
               "undersampled-Fourier image reconstruction"};
  app.set_version_flag("--version", std::string(kVersion));
  app.set_config("--config", "", "key=value config file (command.option=value); command-line "
                                 "flags override file values");
  app.require_subcommand(1);
  // Lets --config appear after the subcommand name as well as before it.
  app.fallthrough();

  LearnOptions learn;
  CLI::App* learn_cmd = app.add_subcommand("learn", "learn a dictionary from image patches");
  learn_cmd->fallthrough();
  learn_cmd->add_option("--images", learn.images, "input images (PGM or SOUPIMG1)")->required();
  learn_cmd->add_option("--out", learn.out, "output directory")->required();
  learn_cmd->add_option("--patch-side", learn.patch_side, "square patch side");
  learn_cmd->add_option("--num-patches", learn.num_patches, "number of sampled patches");
  learn_cmd->add_option("--atoms", learn.atoms, "dictionary atoms");
  learn_cmd->add_option("--method", learn.method, "l0 | l1")
      ->check(CLI::IsMember({"l0", "l1"}));
  learn_cmd->add_option("--lambda", learn.lambda, "l0 penalty weight");
  learn_cmd->add_option("--mu", learn.mu, "l1 penalty weight");
  learn_cmd->add_option("--cap", learn.cap, "l-inf bound on coefficients");
  learn_cmd->add_option("--iters", learn.iters, "learning iterations");
  learn_cmd->add_option("--order", learn.order, "cyclic | random")
      ->check(CLI::IsMember({"cyclic", "random"}));
  learn_cmd->add_option("--seed", learn.seed, "patch sampling / ordering seed");

  SimulateOptions simulate;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "undersample the k-space of a reference image");
  sim_cmd->fallthrough();
  sim_cmd->add_option("--image", simulate.image, "reference image (PGM or SOUPIMG1)")->required();
  sim_cmd->add_option("--out", simulate.out, "output directory")->required();
  sim_cmd->add_option("--scheme", simulate.scheme, "cartesian | random2d")
      ->check(CLI::IsMember({"cartesian", "random2d"}));
  sim_cmd->add_option("--factor", simulate.factor, "undersampling factor (>= 1)");
  sim_cmd->add_option("--seed", simulate.seed, "mask generation seed");
  sim_cmd->add_option("--center-fraction", simulate.center_fraction,
                      "always-kept central band/disk, as a fraction of the grid");
  sim_cmd->add_option("--noise-sigma", simulate.noise_sigma,
                      "additive complex gaussian noise on the measurements");

  ReconOptions recon;
  CLI::App* recon_cmd =
      app.add_subcommand("recon", "dictionary-blind reconstruction from undersampled k-space");
  recon_cmd->fallthrough();
  recon_cmd->add_option("--kspace", recon.kspace, "measurement file (SOUPKSP1)")->required();
  recon_cmd->add_option("--mask", recon.mask, "mask file (SOUPMASK)")->required();
  recon_cmd->add_option("--out", recon.out, "output directory")->required();
  recon_cmd->add_option("--ref", recon.ref, "optional reference image for PSNR");
  recon_cmd->add_option("--method", recon.method, "l0 | l1")
      ->check(CLI::IsMember({"l0", "l1"}));
  recon_cmd->add_option("--patch-side", recon.patch_side, "square patch side");
  recon_cmd->add_option("--atoms", recon.atoms, "dictionary atoms");
  recon_cmd->add_option("--outer", recon.outer, "outer iterations");
  recon_cmd->add_option("--inner", recon.inner, "inner learning iterations (0 = method default)");
  recon_cmd->add_option("--nu", recon.nu, "data weight (0 = nu-scale / pixels)");
  recon_cmd->add_option("--nu-scale", recon.nu_scale, "numerator for the default nu");
  recon_cmd->add_option("--weight-first", recon.weight_first,
                        "first sparsity weight (0 = method default)");
  recon_cmd->add_option("--weight-last", recon.weight_last,
                        "last sparsity weight (0 = method default)");
  recon_cmd->add_option("--cap", recon.cap, "l-inf bound on coefficients");
  recon_cmd->add_option("--solver", recon.solver, "fourier | cg")
      ->check(CLI::IsMember({"fourier", "cg"}));
  recon_cmd->add_option("--cg-tol", recon.cg_tol, "CG relative residual tolerance");
  recon_cmd->add_option("--cg-iters", recon.cg_iters, "CG iteration cap");

  CodeOptions code;
  CLI::App* code_cmd = app.add_subcommand("code", "sparse-code patches against a fixed dictionary");
  code_cmd->fallthrough();
  code_cmd->add_option("--dict", code.dict, "dictionary file (SOUPDIC1)")->required();
  code_cmd->add_option("--images", code.images, "input images")->required();
  code_cmd->add_option("--out", code.out, "output directory")->required();
  code_cmd->add_option("--num-patches", code.num_patches, "number of sampled patches");
  code_cmd->add_option("--seed", code.seed, "patch sampling seed");
  code_cmd->add_option("--method", code.method, "omp | l0bcd")
      ->check(CLI::IsMember({"omp", "l0bcd"}));
  code_cmd->add_option("--sparsity", code.sparsity, "OMP atoms per signal");
  code_cmd->add_option("--err-tol", code.err_tol, "OMP squared-residual stop");
  code_cmd->add_option("--lambda", code.lambda, "l0bcd penalty weight");
  code_cmd->add_option("--cap", code.cap, "l0bcd l-inf bound");
  code_cmd->add_option("--sweeps", code.sweeps, "l0bcd coordinate-descent sweeps");

  BenchOptions bench;
  CLI::App* bench_cmd = app.add_subcommand("bench", "time learning iterations across problem sizes");
  bench_cmd->fallthrough();
  bench_cmd->add_option("--out", bench.out, "output directory")->required();
  bench_cmd->add_option("--n", bench.n, "signal dimension (square)");
  bench_cmd->add_option("--n0", bench.n0, "base signal count");
  bench_cmd->add_option("--atoms0", bench.atoms0, "base atom count");
  bench_cmd->add_option("--iters", bench.iters, "timed iterations per case");
  bench_cmd->add_option("--seed", bench.seed, "data seed");
  bench_cmd->add_option("--lambda", bench.lambda, "l0 penalty weight");

  MetricsOptions metrics;
  CLI::App* metrics_cmd = app.add_subcommand("metrics", "compute metrics from artifact files");
  metrics_cmd->fallthrough();
  metrics_cmd->add_option("--recon", metrics.recon, "reconstructed image");
  metrics_cmd->add_option("--ref", metrics.ref, "reference image");
  metrics_cmd->add_option("--dict", metrics.dict, "dictionary file");
  metrics_cmd->add_option("--coefs", metrics.coefs, "coefficient file");
  metrics_cmd->add_option("--image", metrics.image, "image whose full patch grid matches the coefficients");
  metrics_cmd->add_option("--patch-side", metrics.patch_side, "patch side for --image");
  metrics_cmd->add_option("--stride", metrics.stride, "patch stride for --image");
  metrics_cmd->add_flag("--no-wrap", metrics.no_wrap, "disable wrap-around for --image");
  metrics_cmd->add_option("--out", metrics.out, "optional CSV output path");

  try {
    app.parse(argc, argv);
    check_thread_env();
    if (learn_cmd->parsed()) return run_learn(learn);
    if (sim_cmd->parsed()) return run_simulate(simulate);
    if (recon_cmd->parsed()) return run_recon(recon);
    if (code_cmd->parsed()) return run_code(code);
    if (bench_cmd->parsed()) return run_bench(bench);
    if (metrics_cmd->parsed()) return run_metrics(metrics);
    std::cerr << app.help() << "\n";
    return 1;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const ParameterError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const DimensionError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
