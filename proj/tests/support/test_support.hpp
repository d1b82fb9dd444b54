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

#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "epd/scene.hpp"

namespace epd::testing {

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

// Runs the epd binary with shell-quoted arguments.
CliResult run_cli(const std::vector<std::string>& args, const std::string& env = {});

std::filesystem::path make_temp_dir(const std::string& tag);
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& body);

bool is_well_formed_xml(const std::string& text);

// Spearman rank correlation with average ranks for ties.
double spearman(std::span<const double> x, std::span<const double> y);

// Filled ellipse with pixel-center rasterization, built without the bench code.
Scene ellipse_scene(int width, int height, double cx, double cy, double a, double b,
                    const std::string& id = "ellipse");

// Minimal HTTP server on 127.0.0.1 answering POST /v1/point-vqa.
class StubVqaServer {
 public:
  struct Request {
    std::string path;
    std::string body;
  };
  using Handler = std::function<void(const Request&, int& status, std::string& body)>;

  explicit StubVqaServer(Handler handler);
  ~StubVqaServer();
  StubVqaServer(const StubVqaServer&) = delete;
  StubVqaServer& operator=(const StubVqaServer&) = delete;

  std::string url() const;
  int request_count() const;
  std::vector<Request> requests() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace epd::testing
