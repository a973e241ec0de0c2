// Copyright 2026 The radpair Authors
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

// radpair <evolve|sweep-field|sweep-hfc|trace-qs|fit> --config scenario.json
// radpair presets
//
// Exit codes: 0 success (including flagged non-convergence), 2 config error,
// 3 runtime/numerics error, 4 I/O error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "radpair/scenario.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;
constexpr int kExitIo = 4;

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw radpair::IoError("cannot read config file '" + path + "'");
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

void print_presets() {
    std::cout << "name,A_Py_mT,A_DMA_mT,k_s_per_us,k_t_per_us\n";
    for (const auto& p : radpair::kPyDmaPresets) {
        std::printf("%s,%g,%g,%g,%g\n", std::string(p.name).c_str(), p.a_py_mT, p.a_dma_mT,
                    p.k_s_per_us, p.k_t_per_us);
    }
    using One = radpair::OneNucleusPreset;
    std::printf("# %s: one spin-1/2 nucleus on electron 1, field_mT=%g, A_rad_per_us=%g (default), "
                "k_s_per_us=%g, k_t_per_us=%g\n",
                std::string(One::name).c_str(), One::field_mT, One::a_rad_per_us, One::k_s_per_us,
                One::k_t_per_us);
}

int run(const std::string& kind, const std::string& config_path) {
    const radpair::ScenarioConfig config = radpair::parse_config(read_file(config_path));
    if (radpair::to_string(config.run.kind) != kind) {
        throw radpair::ConfigError("/run/kind", "is '" + std::string(radpair::to_string(config.run.kind)) +
                                                    "' but the subcommand is '" + kind + "'");
    }
    const auto outcome = radpair::run_scenario(config, std::cout);
    return outcome.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Radical-ion-pair spin dynamics: master-equation propagation, yields, sweeps and fits"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(radpair::kVersion));

    std::string config_path;
    for (const char* name : {"evolve", "sweep-field", "sweep-hfc", "trace-qs", "fit"}) {
        auto* sub = app.add_subcommand(name, std::string("run a '") + name + "' scenario");
        sub->add_option("--config", config_path, "scenario file (JSON)")->required();
    }
    app.add_subcommand("presets", "list the built-in model presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    const CLI::App* chosen = app.get_subcommands().front();
    try {
        if (chosen->get_name() == "presets") {
            print_presets();
            return 0;
        }
        return run(chosen->get_name(), config_path);
    } catch (const radpair::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const radpair::IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}
