/*
 * wall-clock deadline handle
 */
#pragma once
#include <chrono>

namespace ctspll {

struct Deadline {
  using Clock = std::chrono::steady_clock;
  Clock::time_point end;
  bool unlimited = false;

  static Deadline after_seconds(double s)
  {
    Deadline d;
    d.end = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                               std::chrono::duration<double>(s));
    return d;
  }
  static Deadline never()
  {
    Deadline d;
    d.unlimited = true;
    return d;
  }
  bool expired() const { return !unlimited && Clock::now() >= end; }
  double remaining_s() const
  {
    if (unlimited) return 1e18;
    return std::chrono::duration<double>(end - Clock::now()).count();
  }
};

inline double elapsed_s(std::chrono::steady_clock::time_point since)
{
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since)
      .count();
}

}  // namespace ctspll
