// Copyright 2026 The AGCN Authors
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

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

namespace agcn::cli {

/// Bad flag combination detected after parsing; exits with status 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One subcommand plus the bound variables whose resolved values get logged.
class Command {
 public:
  explicit Command(CLI::App* app) : app_(app) {}

  template <typename T>
  CLI::Option* option(const std::string& name, T& target, const std::string& desc) {
    logged_.push_back({name, [&target] { return render(target); }, false});
    return app_->add_option(name, target, desc)->capture_default_str();
  }

  CLI::Option* flag(const std::string& name, bool& target, const std::string& desc) {
    logged_.push_back({name, [&target] { return std::string(target ? "true" : "false"); }, true});
    return app_->add_flag(name, target, desc);
  }

  CLI::App* app() const noexcept { return app_; }

  /// `agcn <sub> --key value ...` with every option's resolved value.
  std::string config_line() const;

  /// Resolves derived values (thread count) before the config line is logged.
  std::function<void()> finalize;
  std::function<int()> run;

 private:
  template <typename T>
  static std::string render(const T& v) {
    if constexpr (std::is_same_v<T, std::string>)
      return v;
    else if constexpr (std::is_floating_point_v<T>)
      return format_double(static_cast<double>(v));
    else
      return std::to_string(v);
  }
  static std::string format_double(double x);

  CLI::App* app_;
  struct Logged {
    std::string name;
    std::function<std::string()> value;
    bool is_flag = false;
  };
  std::vector<Logged> logged_;
};

struct Registry {
  std::vector<std::unique_ptr<Command>> commands;
  std::string config_path;
};

/// Adds all subcommands to app; their state lives in the returned registry.
std::unique_ptr<Registry> register_commands(CLI::App& app);

/// Appends `--key=value` for every key of the flat config file that is not
/// already given on the command line.
std::vector<std::string> apply_config_file(std::vector<std::string> args);

}  // namespace agcn::cli
