#pragma once

#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <json.hpp>

namespace nhpump::cli {

/// Shortest round-trip representation, so re-runs are byte-identical.
inline std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

/// Plain CSV: ',' separator, '.' decimal point, LF line endings.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::vector<std::string> header)
      : path_(path), out_(path, std::ios::binary), columns_(header.size()) {
    if (!out_) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_fields(header);
  }

  template <class... Fields>
  void row(const Fields&... fields) {
    static_assert(sizeof...(Fields) > 0);
    std::vector<std::string> cells{cell(fields)...};
    if (cells.size() != columns_) throw std::logic_error("CSV row width mismatch");
    write_fields(cells);
  }

  const std::filesystem::path& path() const { return path_; }

 private:
  static std::string cell(double x) { return format_double(x); }
  static std::string cell(int x) { return std::to_string(x); }
  static std::string cell(bool x) { return x ? "1" : "0"; }
  static std::string cell(const std::string& s) { return s; }
  static std::string cell(const char* s) { return s; }

  void write_fields(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out_ << ',';
      out_ << fields[i];
    }
    out_ << '\n';
  }

  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t columns_;
};

/// Run manifest written next to every output set.
class Manifest {
 public:
  Manifest(std::string command, int argc, const char* const* argv)
      : start_(std::chrono::steady_clock::now()) {
    doc_["command"] = std::move(command);
    doc_["argv"] = std::vector<std::string>(argv, argv + argc);
    doc_["code_version"] = NHPUMP_VERSION;
    const auto now = std::chrono::system_clock::now();
    doc_["started_at_unix"] =
        std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
  }

  nlohmann::json& parameters() { return doc_["parameters"]; }
  nlohmann::json& grid() { return doc_["grid"]; }
  nlohmann::json& tolerances() { return doc_["tolerances"]; }
  nlohmann::json& derived() { return doc_["derived"]; }
  void add_output(const std::filesystem::path& p) {
    doc_["outputs"].push_back(p.filename().string());
  }

  void write(const std::filesystem::path& path) {
    doc_["wall_clock_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << doc_.dump(2) << '\n';
  }

 private:
  nlohmann::json doc_;
  std::chrono::steady_clock::time_point start_;
};

/// --jobs if positive, else NHPUMP_JOBS, else 1.
inline int resolve_jobs(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("NHPUMP_JOBS")) {
    int n = 0;
    const std::string_view s(env);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), n);
    if (res.ec == std::errc{} && n > 0) return n;
  }
  return 1;
}

/// Evaluates f(0..n-1) on a pool of `jobs` threads; results come back in
/// index order. The first exception (by index) is rethrown.
template <class F>
auto parallel_map(std::size_t n, int jobs, F f) -> std::vector<decltype(f(std::size_t{}))> {
  using R = decltype(f(std::size_t{}));
  std::vector<R> results(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        results[i] = f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(n)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

}  // namespace nhpump::cli
