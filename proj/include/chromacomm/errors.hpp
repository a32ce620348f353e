#pragma once

#include <stdexcept>
#include <string>

namespace chromacomm {

// Invalid caller-supplied configuration (bad sizes, empty seed ranges, ...).
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A protocol-level contract was broken at runtime: an out-of-range payload,
// a violated promise, a failed post-check, or divergence between the two
// parties.  These checks stay on in release builds; a protocol that colors
// improperly or miscounts bits must abort, never limp on.
struct protocol_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Transport failures: unreachable peer, short reads, corrupt frames,
// mismatched session seeds.
struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void check_config(bool ok, const std::string& msg) {
  if (!ok) throw config_error(msg);
}

inline void check_protocol(bool ok, const std::string& msg) {
  if (!ok) throw protocol_error(msg);
}

inline void check_io(bool ok, const std::string& msg) {
  if (!ok) throw io_error(msg);
}

}  // namespace chromacomm
