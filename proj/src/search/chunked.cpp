#include <atomic>
#include <chrono>
#include <condition_variable>
#include <ctime>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include "plans.hpp"

namespace fcp {
namespace {

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct Checkpoint {
  std::size_t cursor = 0;
  std::vector<SolutionRecord> records;
  std::string started_at;
};

Checkpoint load_checkpoint(const std::filesystem::path& path, const std::string& digest,
                           std::size_t chunk_count) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read checkpoint " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointMismatch("checkpoint " + path.string() + " is not valid JSON: " + e.what());
  }
  if (j.value("format", "") != "fcp-checkpoint" || j.value("version", 0) != kCheckpointVersion) {
    throw CheckpointMismatch("checkpoint " + path.string() + " has an unsupported format");
  }
  if (j.at("config_digest").get<std::string>() != digest) {
    throw CheckpointMismatch("checkpoint config digest " + j.at("config_digest").get<std::string>() +
                             " does not match the current config " + digest);
  }
  if (j.at("chunk_count").get<std::size_t>() != chunk_count) {
    throw CheckpointMismatch("checkpoint was written for " +
                             std::to_string(j.at("chunk_count").get<std::size_t>()) +
                             " chunks, not " + std::to_string(chunk_count));
  }
  Checkpoint cp;
  cp.cursor = j.at("cursor").get<std::size_t>();
  if (cp.cursor > chunk_count) throw CheckpointMismatch("checkpoint cursor past the last chunk");
  cp.started_at = j.value("started_at", "");
  for (const auto& r : j.at("records")) cp.records.push_back(record_from_json(r));
  return cp;
}

void save_checkpoint(const std::filesystem::path& path, const SearchConfig& cfg,
                     const std::string& digest, std::size_t chunk_count, const Checkpoint& cp) {
  nlohmann::ordered_json j;
  j["format"] = "fcp-checkpoint";
  j["version"] = kCheckpointVersion;
  j["config_digest"] = digest;
  j["config"] = config_to_json(cfg);
  j["chunk_count"] = chunk_count;
  j["cursor"] = cp.cursor;
  j["started_at"] = cp.started_at;
  j["updated_at"] = utc_now();
  auto records = nlohmann::ordered_json::array();
  for (const auto& r : cp.records) records.push_back(record_to_json(r));
  j["records"] = std::move(records);

  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write checkpoint " + tmp.string());
    out << j.dump(1) << '\n';
    if (!out.flush()) throw std::runtime_error("cannot write checkpoint " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

RunOutcome run_chunked(const SearchConfig& cfg, const ChunkOptions& options) {
  if (options.chunk_count == 0) throw ConfigError("chunk count must be positive");
  const auto plan = make_plan(cfg);
  const std::string digest = config_digest(cfg);
  const std::size_t count = options.chunk_count;

  Checkpoint cp;
  cp.started_at = utc_now();
  RunOutcome outcome;
  outcome.chunk_count = count;
  if (options.resume && options.checkpoint && std::filesystem::exists(*options.checkpoint)) {
    cp = load_checkpoint(*options.checkpoint, digest, count);
    outcome.resumed_from = cp.cursor;
  }

  const bool stop_now = options.stop_after && cp.cursor >= *options.stop_after;
  if (cp.cursor < count && !stop_now) {
    std::mutex mu;
    std::condition_variable ready;
    std::map<std::size_t, std::vector<SolutionRecord>> done;
    std::exception_ptr failure;
    std::atomic<std::size_t> next{cp.cursor};
    std::atomic<bool> stop{false};

    auto worker = [&] {
      while (!stop.load()) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          auto recs = plan->run_chunk(i, count);
          std::lock_guard lock(mu);
          done.emplace(i, std::move(recs));
        } catch (...) {
          std::lock_guard lock(mu);
          if (!failure) failure = std::current_exception();
          stop = true;
        }
        ready.notify_all();
      }
    };

    const unsigned threads = std::max(1u, options.threads);
    {
      std::vector<std::jthread> pool;
      pool.reserve(threads);
      for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);

      // Commit strictly in chunk order so the checkpoint cursor is a prefix.
      while (cp.cursor < count) {
        std::unique_lock lock(mu);
        ready.wait(lock, [&] { return failure || done.count(cp.cursor) != 0; });
        if (failure) break;
        auto recs = std::move(done.at(cp.cursor));
        done.erase(cp.cursor);
        lock.unlock();

        cp.records.insert(cp.records.end(), std::make_move_iterator(recs.begin()),
                          std::make_move_iterator(recs.end()));
        normalize_records(cp.records);
        ++cp.cursor;
        if (options.checkpoint) save_checkpoint(*options.checkpoint, cfg, digest, count, cp);
        if (options.stop_after && cp.cursor >= *options.stop_after && cp.cursor < count) {
          stop = true;
          break;
        }
      }
      stop = true;
    }
    if (failure) std::rethrow_exception(failure);
  }

  normalize_records(cp.records);
  outcome.records = std::move(cp.records);
  outcome.chunks_completed = cp.cursor;
  outcome.work_units = plan->work_units();
  outcome.interrupted = cp.cursor < count;
  return outcome;
}

}  // namespace fcp
