// Copyright 2026 The EPD Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// epd: command-line front end for prompt discovery, benchmarks and figures.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "epd/bench.hpp"
#include "epd/config.hpp"
#include "epd/error.hpp"
#include "epd/json_format.hpp"
#include "epd/kernels.hpp"
#include "epd/pipeline.hpp"
#include "epd/scene.hpp"
#include "epd/viz.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string config_path;
  std::string out_path;
  std::string seed;
};

struct BoxArgs {
  std::string bbox;
  std::string dims;
  bool relative = false;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

epd::RunConfig load_config(const Common& c) {
  return c.config_path.empty() ? epd::run_config_from_json(nlohmann::json::object())
                               : epd::load_run_config(c.config_path);
}

// Explicit seed, "random", or (when allowed) the config's seed.
std::uint64_t resolve_seed(const Common& c, const epd::RunConfig& config, bool required) {
  if (c.seed.empty()) {
    if (required) throw UsageError("--seed is required (pass --seed random to draw one)");
    return config.sampler.seed;
  }
  if (c.seed == "random") {
    std::random_device rd;
    const std::uint64_t s = (std::uint64_t{rd()} << 32) ^ rd();
    std::cerr << "epd: using seed " << s << "\n";
    return s;
  }
  std::uint64_t s = 0;
  const char* end = c.seed.data() + c.seed.size();
  const auto [ptr, ec] = std::from_chars(c.seed.data(), end, s);
  if (ec != std::errc() || ptr != end) {
    throw UsageError("--seed must be a non-negative integer or 'random', got '" + c.seed + "'");
  }
  return s;
}

void emit(const Common& c, const std::string& body) {
  if (c.out_path.empty()) {
    std::cout << body;
    std::cout.flush();
    return;
  }
  std::ofstream out(c.out_path, std::ios::binary);
  out << body;
  out.flush();
  if (!out) throw epd::Error(epd::ErrorKind::kIo, "cannot write " + c.out_path);
}

epd::ImageDims require_dims(const std::string& text, const char* flag) {
  if (text.empty()) throw UsageError(std::string(flag) + " is required");
  return epd::parse_dims(text);
}

epd::BBox absolute_box(const BoxArgs& b, const epd::RunConfig& config) {
  if (b.bbox.empty()) throw UsageError("--bbox is required");
  epd::PromptRequest req;
  req.bbox = epd::parse_bbox_list(b.bbox);
  req.relative = b.relative;
  if (b.relative || !b.dims.empty()) {
    req.dims = require_dims(b.dims, "--dims");
    return epd::resolve_bbox(req, config.alpha);
  }
  epd::center_and_axes(req.bbox);
  return req.bbox;
}

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_path, "Run configuration JSON")->check(CLI::ExistingFile);
  cmd->add_option("--out", c.out_path, "Output path (default: stdout)");
  cmd->add_option("--seed", c.seed, "Seed (integer) or 'random'");
}

void add_box(CLI::App* cmd, BoxArgs& b) {
  cmd->add_option("--bbox", b.bbox, "Box as x_min,y_min,x_max,y_max");
  cmd->add_option("--dims", b.dims, "Image size as WxH");
  cmd->add_flag("--relative", b.relative, "Box is on the 0..alpha relative scale");
}

int run(int argc, char** argv) {
  CLI::App app{"Entropy-guided point-prompt discovery"};
  app.require_subcommand(1);
  std::string isa = "auto";
  app.add_option("--isa", isa, "Kernel instruction set")
      ->check(CLI::IsMember({"auto", "scalar", "avx2"}));

  Common spiral_c;
  BoxArgs spiral_b;
  auto* spiral_cmd = app.add_subcommand("spiral", "Emit a spiral path as JSON");
  add_common(spiral_cmd, spiral_c);
  add_box(spiral_cmd, spiral_b);

  Common sample_c;
  BoxArgs sample_b;
  auto* sample_cmd = app.add_subcommand("sample", "Emit scored candidate sets as JSON");
  add_common(sample_cmd, sample_c);
  add_box(sample_cmd, sample_b);

  Common verify_c;
  BoxArgs verify_b;
  std::string expression;
  std::string oracle_kind;
  std::string scene_path;
  std::string scene_id;
  std::string image_uri;
  auto* verify_cmd = app.add_subcommand("verify", "Discover verified prompts for one box");
  add_common(verify_cmd, verify_c);
  add_box(verify_cmd, verify_b);
  verify_cmd->add_option("--expression", expression, "Referring expression");
  verify_cmd->add_option("--oracle", oracle_kind, "Oracle override")
      ->check(CLI::IsMember({"mask", "remote"}));
  verify_cmd->add_option("--scene", scene_path, "Scene file (mask oracle)")
      ->check(CLI::ExistingFile);
  verify_cmd->add_option("--scene-id", scene_id, "Scene to use from the scene file");
  verify_cmd->add_option("--image-uri", image_uri, "Image reference sent to the oracle");

  Common bench_c;
  std::string scenes_path;
  int synthetic = 0;
  std::string shapes = "ellipse";
  std::string scene_dims = "320x240";
  std::string strategies = "spiral,random";
  std::string regimes = "tight,severe_per_side";
  std::string etas = "0,0.6,0.7,0.8";
  int seeds_per_scene = 20;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  std::string csv_path;
  std::string text_path;
  auto* bench_cmd = app.add_subcommand("bench", "Run the strategy x perturbation comparison");
  add_common(bench_cmd, bench_c);
  bench_cmd->add_option("--scenes", scenes_path, "Scene file")->check(CLI::ExistingFile);
  bench_cmd->add_option("--synthetic", synthetic, "Generate this many synthetic scenes")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--shapes", shapes, "Synthetic shapes (ellipse,rectangle,blob-polygon)");
  bench_cmd->add_option("--scene-dims", scene_dims, "Synthetic frame size as WxH");
  bench_cmd->add_option("--strategies", strategies, "Comma list of spiral,random,ray");
  bench_cmd->add_option("--regimes", regimes, "Comma list of tight,mild_one_side,severe_per_side");
  bench_cmd->add_option("--etas", etas, "Comma list of confidence thresholds");
  bench_cmd->add_option("--seeds-per-scene", seeds_per_scene, "Perturbation seeds per scene")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--csv", csv_path, "CSV report path (default: --out or stdout)");
  bench_cmd->add_option("--text", text_path, "Aligned text report path");

  Common viz_c;
  bool grid = false;
  std::string aspect = "1:1";
  std::string direction = "cw";
  std::string terminal = "right";
  int canvas = 200;
  bool no_candidates = false;
  auto* viz_cmd = app.add_subcommand("viz", "Render spiral panels as SVG");
  add_common(viz_cmd, viz_c);
  viz_cmd->add_flag("--grid", grid, "Full 3 x 8 grid");
  viz_cmd->add_option("--aspect", aspect, "Panel aspect")
      ->check(CLI::IsMember({"1:1", "1:1.5", "1:2"}));
  viz_cmd->add_option("--direction", direction, "Panel direction (cw, ccw)");
  viz_cmd->add_option("--terminal", terminal, "Panel terminal (top, bottom, left, right)");
  viz_cmd->add_option("--canvas", canvas, "Panel width in px")->check(CLI::Range(20, 4000));
  viz_cmd->add_flag("--no-candidates", no_candidates, "Omit candidate glyphs");

  Common convert_c;
  BoxArgs convert_b;
  std::string to;
  std::optional<double> alpha;
  auto* convert_cmd = app.add_subcommand("convert", "Map boxes between relative and absolute");
  add_common(convert_cmd, convert_c);
  convert_cmd->add_option("--bbox", convert_b.bbox, "Box as x_min,y_min,x_max,y_max");
  convert_cmd->add_option("--dims", convert_b.dims, "Image size as WxH");
  convert_cmd->add_option("--alpha", alpha, "Relative scale (default: config alpha)");
  convert_cmd->add_option("--to", to, "Target form")
      ->check(CLI::IsMember({"absolute", "relative"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "epd: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  if (isa == "scalar") epd::kernels::set_active_isa(epd::kernels::Isa::kScalar);
  if (isa == "avx2") epd::kernels::set_active_isa(epd::kernels::Isa::kAvx2);

  if (*spiral_cmd) {
    const epd::RunConfig config = load_config(spiral_c);
    const std::uint64_t seed = resolve_seed(spiral_c, config, false);
    const epd::BBox box = absolute_box(spiral_b, config);
    epd::RunConfig cfg = config;
    cfg.sampler.strategy = epd::SamplingStrategy::kSpiral;
    const epd::CandidateStage stage = epd::generate_candidates(box, cfg, seed);
    emit(spiral_c, epd::spiral_path_to_json(*stage.path, box, stage.orientation) + "\n");
  } else if (*sample_cmd) {
    const epd::RunConfig config = load_config(sample_c);
    const std::uint64_t seed = resolve_seed(sample_c, config, false);
    const epd::BBox box = absolute_box(sample_b, config);
    emit(sample_c, epd::candidate_set_to_json(epd::generate_candidates(box, config, seed)) + "\n");
  } else if (*verify_cmd) {
    epd::RunConfig config = load_config(verify_c);
    config.sampler.seed = resolve_seed(verify_c, config, true);
    if (oracle_kind == "mask") config.oracle.kind = epd::OracleKind::kMask;
    if (oracle_kind == "remote") config.oracle.kind = epd::OracleKind::kRemote;

    std::optional<epd::Scene> scene;
    if (!scene_path.empty()) {
      std::vector<epd::Scene> scenes = epd::load_scenes(scene_path);
      if (scene_id.empty()) {
        if (scenes.size() != 1) throw UsageError("--scene-id is required for multi-scene files");
        scene = std::move(scenes.front());
      } else {
        for (epd::Scene& s : scenes) {
          if (s.scene_id == scene_id) scene = std::move(s);
        }
        if (!scene) throw UsageError("--scene-id '" + scene_id + "' not found in " + scene_path);
      }
    }
    if (config.oracle.kind == epd::OracleKind::kMask && !scene) {
      throw UsageError("--scene is required with the mask oracle");
    }
    if (verify_b.bbox.empty()) throw UsageError("--bbox is required");

    epd::PromptRequest req;
    req.bbox = epd::parse_bbox_list(verify_b.bbox);
    req.relative = verify_b.relative;
    if (!verify_b.dims.empty()) {
      req.dims = epd::parse_dims(verify_b.dims);
    } else if (scene) {
      req.dims = scene->dims;
    } else {
      throw UsageError("--dims is required");
    }
    if (scene && (scene->dims.width != req.dims.width || scene->dims.height != req.dims.height)) {
      throw UsageError("--dims does not match the scene dimensions");
    }
    req.expression = !expression.empty() ? expression : scene ? scene->expression : "";
    if (req.expression.empty()) throw UsageError("--expression is required");
    req.image_uri = !image_uri.empty() ? image_uri : scene ? scene->image_uri : "";

    auto oracle = epd::make_oracle(config.oracle, scene ? &*scene : nullptr, config.sampler.seed);
    try {
      emit(verify_c, epd::prompt_bundle_to_json(epd::discover_prompts(req, config, *oracle)) + "\n");
    } catch (const epd::InsufficientEvidenceError& e) {
      epd::PromptBundle partial;
      partial.bbox = epd::resolve_bbox(req, config.alpha);
      partial.trace = e.partial().trace;
      partial.seed = config.sampler.seed;
      partial.config_digest = epd::config_digest(config);
      std::cerr << "epd: partial trace: " << epd::prompt_bundle_to_json(partial) << "\n";
      throw;
    }
  } else if (*bench_cmd) {
    const epd::RunConfig config = load_config(bench_c);
    epd::ComparisonOptions opts;
    opts.master_seed = resolve_seed(bench_c, config, true);
    opts.seeds_per_scene = seeds_per_scene;
    opts.jobs = jobs;
    opts.etas.clear();
    for (const std::string& e : split_list(etas)) {
      try {
        opts.etas.push_back(std::stod(e));
      } catch (const std::exception&) {
        throw UsageError("--etas: '" + e + "' is not a number");
      }
    }

    std::vector<epd::Scene> scenes;
    if (!scenes_path.empty() && synthetic > 0) {
      throw UsageError("--scenes and --synthetic are mutually exclusive");
    }
    if (!scenes_path.empty()) {
      scenes = epd::load_scenes(scenes_path);
    } else if (synthetic > 0) {
      std::vector<epd::ShapeKind> kinds;
      for (const std::string& s : split_list(shapes)) kinds.push_back(epd::shape_kind_from_string(s));
      epd::Rng rng(epd::Rng::derive_seed(opts.master_seed, {0}));
      scenes = epd::generate_synthetic_scenes(synthetic, kinds, epd::parse_dims(scene_dims), rng);
    } else {
      throw UsageError("one of --scenes or --synthetic is required");
    }

    std::vector<epd::SamplingStrategy> strats;
    for (const std::string& s : split_list(strategies)) {
      strats.push_back(epd::sampling_strategy_from_string(s));
    }
    std::vector<epd::PerturbationRegime> regs;
    for (const std::string& r : split_list(regimes)) {
      epd::PerturbationRegime reg;
      reg.kind = epd::perturbation_kind_from_string(r);
      regs.push_back(reg);
    }
    const auto table = epd::run_comparison(scenes, strats, regs, config, opts);
    if (!csv_path.empty()) {
      epd::emit_report(table, csv_path, text_path);
    } else {
      emit(bench_c, epd::report_csv(table));
      if (!text_path.empty()) {
        std::ofstream out(text_path, std::ios::binary);
        out << epd::report_text(table);
        if (!out) throw epd::Error(epd::ErrorKind::kIo, "cannot write " + text_path);
      }
    }
  } else if (*viz_cmd) {
    const epd::RunConfig config = load_config(viz_c);
    const std::uint64_t seed = resolve_seed(viz_c, config, false);
    if (grid) {
      emit(viz_c, epd::render_grid(epd::standard_grid_specs(canvas), config.spiral, config.sampler,
                                   seed, !no_candidates));
    } else {
      epd::PanelSpec spec;
      spec.aspect = epd::aspect_from_string(aspect);
      spec.orientation = {epd::direction_from_string(direction),
                          epd::terminal_from_string(terminal)};
      spec.canvas_px = canvas;
      epd::SpiralConfig sc = config.spiral;
      sc.orientation = spec.orientation;
      const epd::BBox box = epd::panel_bbox(spec);
      const epd::SpiralPath path = epd::generate_spiral(box, sc);
      epd::CandidateSet cands;
      if (!no_candidates) {
        epd::Rng rng(epd::Rng::derive_seed(seed, {0}));
        cands = epd::spiral_candidates(path, box, config.sampler, rng);
      }
      emit(viz_c, epd::render_panel(path, no_candidates ? nullptr : &cands, spec, sc));
    }
  } else if (*convert_cmd) {
    const epd::RunConfig config = load_config(convert_c);
    const double a = alpha.value_or(config.alpha);
    if (convert_b.bbox.empty()) throw UsageError("--bbox is required");
    if (to.empty()) throw UsageError("--to is required");
    const epd::BBox in = epd::parse_bbox_list(convert_b.bbox);
    const epd::ImageDims dims = require_dims(convert_b.dims, "--dims");
    const epd::BBox out = to == "absolute" ? epd::convert_relative_to_absolute(in, dims, a)
                                           : epd::convert_absolute_to_relative(in, dims, a);
    emit(convert_c, "[" + epd::format_shortest(out.x_min) + "," + epd::format_shortest(out.y_min) +
                        "," + epd::format_shortest(out.x_max) + "," +
                        epd::format_shortest(out.y_max) + "]\n");
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const UsageError& e) {
    std::cerr << "epd: usage: " << e.what() << "\n";
    return kExitUsage;
  } catch (const epd::Error& e) {
    std::cerr << "epd: " << epd::to_string(e.kind()) << " error";
    if (!e.stage().empty()) std::cerr << " [stage=" << e.stage() << "]";
    std::cerr << ": " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "epd: " << e.what() << "\n";
    return kExitDomain;
  }
}
