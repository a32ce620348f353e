#pragma once

#include <cstdint>

namespace chromacomm {

// The two endpoints of every session.  Edge partitions, transcripts and wire
// frames all use this tag; Alice is 0 on the wire, Bob is 1.
enum class Party : std::uint8_t { alice = 0, bob = 1 };

inline Party other(Party p) { return p == Party::alice ? Party::bob : Party::alice; }

inline const char* party_name(Party p) { return p == Party::alice ? "alice" : "bob"; }

}  // namespace chromacomm
