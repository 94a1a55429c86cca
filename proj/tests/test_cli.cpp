// Copyright 2026 The hyperifs Authors
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

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "hyperifs/corpus.hpp"
#include "hyperifs/io.hpp"

#ifndef HYPERIFS_CLI_PATH
#define HYPERIFS_CLI_PATH "./hyperifs"
#endif

namespace {

namespace fs = std::filesystem;

int run_cli(const std::string& args) {
  std::string cmd = std::string(HYPERIFS_CLI_PATH) + " " + args +
                    " > cli_test_stdout.txt 2>&1";
  int status = std::system(cmd.c_str());
  if (status < 0) return -1;
#ifdef WEXITSTATUS
  return WEXITSTATUS(status);
#else
  return status;
#endif
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string str() const { return path.string(); }
};

}  // namespace

TEST_CASE("unknown corpus name exits 3") {
  REQUIRE(run_cli("run --system no_such_system --experiment attractor") == 3);
}

TEST_CASE("malformed config file exits 2") {
  std::ofstream("cli_test_bad.json") << "{ not json";
  REQUIRE(run_cli("run --system cli_test_bad.json --experiment attractor") ==
          2);
  std::remove("cli_test_bad.json");
}

TEST_CASE("out-of-range parameters exit 4") {
  REQUIRE(run_cli("run --system psi_interval --experiment equicontinuity "
                  "--resolution 256 --eps 0.000001") == 4);
  REQUIRE(run_cli("run --system psi_interval --experiment symbolic "
                  "--resolution 256") == 4);
}

TEST_CASE("attractor run writes a reproducible report and artifacts") {
  TempDir a("cli_test_out_a"), b("cli_test_out_b");
  std::string base =
      "run --system psi_interval --experiment attractor --resolution 512 "
      "--eps 0.0625 --out ";
  REQUIRE(run_cli(base + a.str()) == 0);
  REQUIRE(run_cli(base + b.str()) == 0);

  for (const char* f :
       {"report.json", "certificate.json", "trace.csv", "trace.svg",
        "filmstrip.svg"}) {
    CAPTURE(f);
    REQUIRE(fs::exists(a.path / f));
    REQUIRE(slurp((a.path / f).string()) == slurp((b.path / f).string()));
  }

  hyperifs::Json rep = hyperifs::load_json((a.path / "report.json").string());
  REQUIRE(rep.at("experiment") == "attractor");
  REQUIRE(rep.at("system").at("name") == "psi_interval");
  REQUIRE(rep.at("all_converged") == true);
  REQUIRE(rep.at("max_first_hit").get<int>() >= 1);
  REQUIRE(rep.at("bound").at("found") == true);

  // The stored certificate passes verification through the CLI, and a
  // tampered copy is refused with exit 5.
  std::string cert = (a.path / "certificate.json").string();
  REQUIRE(run_cli("verify-certificate " + cert) == 0);
  hyperifs::Json doc = hyperifs::load_json(cert);
  doc["N"] = doc["N"].get<int>() + 1;
  hyperifs::save_json(cert, doc);
  REQUIRE(run_cli("verify-certificate " + cert) == 5);
}

TEST_CASE("a refuted property still exits 0") {
  TempDir d("cli_test_out_c");
  REQUIRE(run_cli("run --system single_contraction --experiment minimality "
                  "--resolution 512 --eps 0.05 --trials 24 --out " +
                  d.str()) == 0);
  hyperifs::Json rep = hyperifs::load_json((d.path / "report.json").string());
  REQUIRE(rep.at("minimal_up_to_resolution") == false);
  REQUIRE(rep.contains("failing_ball"));
}

TEST_CASE("config files load through the run subcommand") {
  TempDir d("cli_test_out_d");
  hyperifs::IfsSystem sys = hyperifs::make_system("shift2", 256);
  hyperifs::save_json("cli_test_shift2.json", hyperifs::system_to_json(sys));
  REQUIRE(run_cli("run --system cli_test_shift2.json --experiment symbolic "
                  "--out " +
                  d.str()) == 0);
  hyperifs::Json rep = hyperifs::load_json((d.path / "report.json").string());
  REQUIRE(rep.at("shift_sensitive").at("sensitive_on_all") == true);
  REQUIRE(rep.at("prepend_equicontinuous").at("delta_equals_eps") == true);
  std::remove("cli_test_shift2.json");
}
