#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "dseg/detector.hpp"
#include "dseg/error.hpp"
#include "dseg/evaluation.hpp"
#include "dseg/hierarchical.hpp"
#include "dseg/io.hpp"

namespace dseg::cli {
namespace {

struct Options {
  std::vector<std::string> inputs;
  std::string out;
  std::string render;
  double min_length = 0.0;
  int levels = 3;
  double scale = 2.0;
  std::uint64_t seed = 0;
  int frames = 4;
  DetectorParams params;
};

void add_detector_flags(CLI::App& app, Options& o) {
  app.add_option("--tau-gmax", o.params.tau_gmax, "Seed contrast threshold (raw Sobel units)");
  app.add_option("--tau-angle", o.params.tau_angle, "Cosine gate on gradient direction");
  app.add_option("--delta-t", o.params.delta_t, "Extension step in pixels");
  app.add_option("--sigma-r", o.params.sigma_r, "Cross-track observation std-dev in pixels");
  app.add_option("--n-o", o.params.n_o, "Half-count of cross-track measures");
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path);
  if (!f || !(f << text)) {
    throw Error(ErrorCode::kIo, path + ": cannot write");
  }
}

int emit_segments(const Options& o, const GrayImage& img,
                  const std::vector<Segment>& segs, std::ostream& out) {
  write_text(o.out, segments_to_json(segs, img.width(), img.height()).dump(2) + "\n", out);
  if (!o.render.empty()) {
    write_text(o.render, render_svg(img, segs, o.min_length), out);
  }
  return kOk;
}

int run_detect(const Options& o, std::ostream& out) {
  o.params.validate();
  const GrayImage img = read_image(o.inputs.at(0));
  return emit_segments(o, img, detect(img, o.params), out);
}

int run_hdetect(const Options& o, std::ostream& out) {
  HierarchicalParams hp;
  hp.base = o.params;
  hp.n_p = o.levels;
  hp.s_p = o.scale;
  hp.validate();
  const GrayImage img = read_image(o.inputs.at(0));
  return emit_segments(o, img, detect_hierarchical(img, hp), out);
}

int run_bench_noise(const Options& o, std::ostream& out) {
  o.params.validate();
  if (o.frames < 1) {
    throw Error(ErrorCode::kInvalidConfiguration, "--frames must be at least 1");
  }
  const GrayImage img = read_image(o.inputs.at(0));
  const std::vector<Segment> ref = detect(img, o.params);

  const int n = o.frames + 1;
  std::vector<NoiseBenchRow> rows(n);
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto work = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        // Each frame draws from its own stream so the result does not depend
        // on scheduling.
        const GrayImage noisy = add_noise(img, i, o.seed + static_cast<std::uint64_t>(i));
        const std::vector<Segment> segs = i == 0 ? ref : detect(noisy, o.params);
        rows[i] = {i, segs.size(), match(ref, segs)};
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const unsigned workers = worker_count(static_cast<unsigned>(n));
  for (unsigned k = 1; k < workers; ++k) pool.emplace_back(work);
  work();
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  std::string csv = std::string(kBenchCsvHeader) + "\n";
  for (const NoiseBenchRow& row : rows) csv += to_csv_row(row) + "\n";
  write_text(o.out, csv, out);
  return kOk;
}

int run_match(const Options& o, std::ostream& out) {
  if (o.inputs.size() != 2) {
    throw Error(ErrorCode::kInvalidConfiguration,
                "match needs --input REF.json --input CUR.json");
  }
  for (const std::string& p : o.inputs) {
    if (!std::ifstream(p)) throw Error(ErrorCode::kIo, p + ": cannot open file");
  }
  const MatchReport r = match(read_segments(o.inputs[0]), read_segments(o.inputs[1]));
  const nlohmann::json doc{{"n_ref", r.n_ref},         {"n_cur", r.n_cur},
                           {"matched", r.matched},     {"unmatched", r.unmatched},
                           {"split", r.split},         {"repeatability", r.repeatability}};
  write_text(o.out, doc.dump(2) + "\n", out);
  return kOk;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIo:
    case ErrorCode::kInvalidInput:
      return kUnreadableInput;
    case ErrorCode::kSchema:
      return kSchemaMismatch;
    default:
      return kInvalidParams;
  }
}

}  // namespace

unsigned worker_count(unsigned jobs) {
  unsigned cap = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("DSEG_THREADS"); env && *env) {
    const std::string text(env);
    std::size_t used = 0;
    long v = 0;
    try {
      v = std::stol(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != text.size() || v < 1) {
      throw std::invalid_argument("DSEG_THREADS must be a positive integer, got '" + text + "'");
    }
    cap = static_cast<unsigned>(std::min<long>(v, 1024));
  }
  return std::max(1u, std::min(cap, jobs));
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Line segment detection with a Kalman-filtered line model"};
  app.require_subcommand(1);
  Options o;

  auto* detect_cmd = app.add_subcommand("detect", "Detect segments in an image");
  auto* hdetect_cmd = app.add_subcommand("hdetect", "Coarse-to-fine detection on a pyramid");
  auto* bench_cmd = app.add_subcommand("bench-noise", "Repeatability under increasing noise");
  auto* match_cmd = app.add_subcommand("match", "Match two segment files");

  for (CLI::App* cmd : {detect_cmd, hdetect_cmd}) {
    cmd->add_option("--input", o.inputs, "PGM or PNG image")->required()->expected(1);
    cmd->add_option("--out", o.out, "Segment JSON (default: stdout)");
    cmd->add_option("--render", o.render, "SVG overlay path");
    cmd->add_option("--min-length", o.min_length, "Shortest segment drawn in the overlay");
    add_detector_flags(*cmd, o);
  }
  hdetect_cmd->add_option("--levels", o.levels, "Pyramid levels");
  hdetect_cmd->add_option("--scale", o.scale, "Pyramid scale factor");

  bench_cmd->add_option("--input", o.inputs, "Reference image")->required()->expected(1);
  bench_cmd->add_option("--out", o.out, "CSV output (default: stdout)");
  bench_cmd->add_option("--frames", o.frames, "Highest noise frame index");
  bench_cmd->add_option("--seed", o.seed, "RNG seed");
  add_detector_flags(*bench_cmd, o);

  match_cmd->add_option("--input", o.inputs, "Reference then current segment JSON")
      ->required()
      ->expected(2);
  match_cmd->add_option("--out", o.out, "Report JSON (default: stdout)");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "dseg: " << e.what() << "\n";
    return kInvalidParams;
  }

  try {
    if (detect_cmd->parsed()) return run_detect(o, out);
    if (hdetect_cmd->parsed()) return run_hdetect(o, out);
    if (bench_cmd->parsed()) return run_bench_noise(o, out);
    return run_match(o, out);
  } catch (const Error& e) {
    err << "dseg: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::invalid_argument& e) {
    err << "dseg: " << e.what() << "\n";
    return kInvalidParams;
  }
}

}  // namespace dseg::cli
