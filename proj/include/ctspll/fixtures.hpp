/*
 * regression fixtures: a solvable deadlock and a solvable livelock that
 * plain Extended-PIBT cannot escape for any seed
 *
 * Deadlock: agent 0 needs the task cell occupied by agent 1, whose only
 * escape is a swap; agent 0's best fallback is to wait, so both stand still.
 *
 * Livelock: two agents start on each other's goals around a ring corridor.
 * Priority alternation pushes them around a four-step cycle forever, even
 * though rotating around the ring solves the instance.
 */
#pragma once
#include <string>

namespace ctspll {
namespace fixtures {

// pocket cell (0,2) hangs off an open corridor row
inline const char* kDeadlockMap =
    "type octile\n"
    "height 3\n"
    "width 5\n"
    "map\n"
    "@@.@@\n"
    ".....\n"
    "@@@@@\n";

inline const char* kDeadlockScenario =
    "cts 1\n"
    "agent 0 1 2 1 4\n"
    "agent 1 0 2 1 0\n"
    "task 0 0 2 0\n";

// ring of ten cells around a blocked core
inline const char* kLivelockMap =
    "type octile\n"
    "height 3\n"
    "width 4\n"
    "map\n"
    "....\n"
    ".@@.\n"
    "....\n";

inline const char* kLivelockScenario =
    "cts 1\n"
    "agent 0 0 0 0 1\n"
    "agent 1 0 1 0 0\n";

}  // namespace fixtures
}  // namespace ctspll
