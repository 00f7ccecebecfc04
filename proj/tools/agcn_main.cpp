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

#include <iostream>

#include "agcn/common.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace agcn;
  CLI::App app{"Link prediction on attributed graphs with AGCN", "agcn"};
  app.require_subcommand(1, 1);
  auto registry = cli::register_commands(app);

  auto usage = [&](const std::string& message) {
    std::cerr << "agcn: " << message << "\n\n";
    CLI::App* sub = nullptr;
    for (auto* s : app.get_subcommands()) sub = s;
    std::cerr << (sub ? sub->help() : app.help());
    return 1;
  };

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = cli::apply_config_file(std::move(args));
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    CLI::App* sub = nullptr;
    for (auto* s : app.get_subcommands()) sub = s;
    std::cout << (sub ? sub->help() : app.help());
    return 0;
  } catch (const CLI::ParseError& e) {
    return usage(e.what());
  } catch (const DataError& e) {
    std::cerr << "agcn: " << e.what() << '\n';
    return 2;
  }

  for (auto& cmd : registry->commands) {
    if (!cmd->app()->parsed()) continue;
    try {
      if (cmd->finalize) cmd->finalize();
      std::cerr << "[config] " << cmd->config_line() << '\n';
      return cmd->run();
    } catch (const cli::UsageError& e) {
      return usage(e.what());
    } catch (const NumericalError& e) {
      std::cerr << "agcn: numerical failure: " << e.what() << '\n';
      return 3;
    } catch (const std::exception& e) {
      std::cerr << "agcn: " << e.what() << '\n';
      return 2;
    }
  }
  return 1;
}
