#pragma once

// Shared test fixtures: seeded random instances, the hand-built
// strict-improvement case, a Procrustes alignment residual, and a small
// subprocess runner for exercising the CLI binary.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rankfuse/core.hpp"
#include "rankfuse/random.hpp"
#include "rankfuse/spectral.hpp"

namespace testsupport {

inline std::vector<std::vector<double>> random_raw(rankfuse::SeededRng& rng,
                                                   int rows, int cols) {
  std::vector<std::vector<double>> raw(rows, std::vector<double>(cols));
  for (auto& row : raw) {
    for (double& v : row) v = rng.next_double();
  }
  return raw;
}

inline std::vector<int> random_subset(rankfuse::SeededRng& rng, int universe,
                                      int size) {
  std::vector<int> pool(universe);
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < size; ++i) {
    const int j = i + static_cast<int>(rng.next_below(universe - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(size);
  std::sort(pool.begin(), pool.end());
  return pool;
}

struct RandomCase {
  rankfuse::PersonalDissimilarityMatrix matrix;
  rankfuse::SupervisionInstance instance;
};

inline RandomCase random_case(std::uint64_t seed, int rows, int cols,
                              int s_size) {
  rankfuse::SeededRng rng(seed);
  auto matrix =
      rankfuse::PersonalDissimilarityMatrix::ingest(random_raw(rng, rows, cols));
  auto inst = rankfuse::SupervisionInstance::make(
      rows, random_subset(rng, rows, s_size));
  return {std::move(matrix), std::move(inst)};
}

// Two representations, one supervised row, where neither single column is
// optimal but an even blend ranks the supervised row first.
inline RandomCase blended_optimum_case() {
  const std::vector<std::vector<double>> raw = {
      {0.5, 0.5},  // supervised
      {0.4, 0.9},
      {0.9, 0.4},
      {0.9, 0.9},
  };
  return {rankfuse::PersonalDissimilarityMatrix::ingest(raw),
          rankfuse::SupervisionInstance::make(4, {0})};
}

/// min over orthogonal W of the Frobenius distance between Y W and X,
/// via the polar factor of Y'X.
inline double procrustes_residual(const rankfuse::Embedding& emb,
                                  const rankfuse::LatentPositions& latents) {
  const int n = emb.n;
  const int d = emb.dim;
  if (latents.size() != n || latents.dim() != d) {
    throw std::invalid_argument("procrustes shapes disagree");
  }
  std::vector<double> m(static_cast<std::size_t>(d) * d, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < d; ++a) {
      for (int b = 0; b < d; ++b) {
        m[static_cast<std::size_t>(a) * d + b] +=
            emb.row(i)[a] * latents.row(i)[b];
      }
    }
  }
  // W = M (M'M)^(-1/2)
  std::vector<double> mtm(static_cast<std::size_t>(d) * d, 0.0);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      double acc = 0.0;
      for (int k = 0; k < d; ++k) {
        acc += m[static_cast<std::size_t>(k) * d + a] *
               m[static_cast<std::size_t>(k) * d + b];
      }
      mtm[static_cast<std::size_t>(a) * d + b] = acc;
    }
  }
  const rankfuse::EighResult eig = rankfuse::symmetric_eigh(mtm, d);
  std::vector<double> inv_sqrt(static_cast<std::size_t>(d) * d, 0.0);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      double acc = 0.0;
      for (int k = 0; k < d; ++k) {
        acc += eig.vec(a, k) * eig.vec(b, k) / std::sqrt(eig.values[k]);
      }
      inv_sqrt[static_cast<std::size_t>(a) * d + b] = acc;
    }
  }
  std::vector<double> w(static_cast<std::size_t>(d) * d, 0.0);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      double acc = 0.0;
      for (int k = 0; k < d; ++k) {
        acc += m[static_cast<std::size_t>(a) * d + k] *
               inv_sqrt[static_cast<std::size_t>(k) * d + b];
      }
      w[static_cast<std::size_t>(a) * d + b] = acc;
    }
  }
  double ss = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int b = 0; b < d; ++b) {
      double y = 0.0;
      for (int a = 0; a < d; ++a) {
        y += emb.row(i)[a] * w[static_cast<std::size_t>(a) * d + b];
      }
      const double diff = y - latents.row(i)[b];
      ss += diff * diff;
    }
  }
  return std::sqrt(ss);
}

// --- subprocess helpers -----------------------------------------------------

struct CommandResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

class TempDir {
 public:
  TempDir() {
    auto base = std::filesystem::temp_directory_path();
    for (int attempt = 0;; ++attempt) {
      path_ = base / ("rankfuse_test_" + std::to_string(::getpid()) + "_" +
                      std::to_string(counter()++));
      std::error_code ec;
      if (std::filesystem::create_directory(path_, ec)) break;
      if (attempt > 100) throw std::runtime_error("cannot create temp dir");
    }
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path file(const std::string& name) const {
    return path_ / name;
  }
  const std::filesystem::path& path() const { return path_; }

  void write(const std::string& name, const std::string& content) const {
    std::ofstream out(file(name), std::ios::binary);
    out << content;
  }

  std::string read(const std::string& name) const {
    std::ifstream in(file(name), std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  }

 private:
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::filesystem::path path_;
};

inline CommandResult run_cli(const TempDir& dir, const std::string& args) {
  const std::string out_path = dir.file("cmd_stdout.txt").string();
  const std::string err_path = dir.file("cmd_stderr.txt").string();
  const std::string cmd = std::string(RANKFUSE_CLI_PATH) + " " + args + " >" +
                          out_path + " 2>" + err_path;
  const int raw = std::system(cmd.c_str());
  CommandResult result;
  result.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  result.out = dir.read("cmd_stdout.txt");
  result.err = dir.read("cmd_stderr.txt");
  return result;
}

}  // namespace testsupport
