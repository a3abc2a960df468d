#ifndef PAT_SRC_SUBPROCESS_HPP_
#define PAT_SRC_SUBPROCESS_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace pat::internal {

// Spawns argv in its own process group, writes `request` to its stdin and
// reads one length-prefixed frame from its stdout. The whole group is killed
// and reaped before returning, on every path.
//
// Throws Error(kSpawnError) if the program cannot be started,
// Error(kTimeout) past the deadline, Error(kProtocolError) if stdout closes
// before a full frame arrives.
std::vector<std::uint8_t> exchange_frame(const std::vector<std::string>& argv,
                                         std::span<const std::uint8_t> request,
                                         int timeout_ms);

}  // namespace pat::internal

#endif  // PAT_SRC_SUBPROCESS_HPP_
