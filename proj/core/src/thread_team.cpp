#include "autotune/thread_team.hpp"

#include "autotune/errors.hpp"

namespace autotune {

ThreadTeam::ThreadTeam(int threads) {
  if (threads < 1) {
    throw config_error("thread team requires at least one thread");
  }
  workers_.reserve(threads - 1);
  for (int id = 1; id < threads; ++id) {
    workers_.emplace_back([this, id] { worker_loop(id); });
  }
}

ThreadTeam::~ThreadTeam() {
  {
    std::lock_guard lock(mutex_);
    stop_ = true;
  }
  start_cv_.notify_all();
  for (auto& w : workers_) w.join();
}

void ThreadTeam::worker_loop(int id) {
  unsigned long seen = 0;
  while (true) {
    const std::function<void(int)>* job = nullptr;
    {
      std::unique_lock lock(mutex_);
      start_cv_.wait(lock, [&] { return stop_ || generation_ != seen; });
      if (stop_) return;
      seen = generation_;
      job = job_;
    }
    (*job)(id);
    {
      std::lock_guard lock(mutex_);
      ++done_;
    }
    done_cv_.notify_one();
  }
}

void ThreadTeam::run(const std::function<void(int)>& body) {
  if (workers_.empty()) {
    body(0);
    return;
  }
  {
    std::lock_guard lock(mutex_);
    job_ = &body;
    done_ = 0;
    ++generation_;
  }
  start_cv_.notify_all();
  body(0);
  std::unique_lock lock(mutex_);
  done_cv_.wait(lock, [&] { return done_ == static_cast<int>(workers_.size()); });
  job_ = nullptr;
}

}  // namespace autotune
