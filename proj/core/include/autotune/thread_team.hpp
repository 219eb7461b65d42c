#pragma once

#include <condition_variable>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace autotune {

/// Persistent pool of worker threads for fork-join regions.
///
/// run(body) executes body(worker_id) on `size()` workers (the calling
/// thread acts as worker 0) and returns once all are done. Completion
/// synchronizes memory: writes made inside one region are visible to the
/// next. Bodies must not throw.
class ThreadTeam {
public:
  explicit ThreadTeam(int threads);
  ~ThreadTeam();

  ThreadTeam(const ThreadTeam&) = delete;
  ThreadTeam& operator=(const ThreadTeam&) = delete;

  int size() const { return static_cast<int>(workers_.size()) + 1; }

  void run(const std::function<void(int)>& body);

private:
  void worker_loop(int id);

  std::vector<std::thread> workers_;
  std::mutex mutex_;
  std::condition_variable start_cv_;
  std::condition_variable done_cv_;
  const std::function<void(int)>* job_ = nullptr;
  unsigned long generation_ = 0;
  int done_ = 0;
  bool stop_ = false;
};

}  // namespace autotune
