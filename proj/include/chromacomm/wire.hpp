#pragma once

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstdint>
#include <cstring>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "chromacomm/channel.hpp"
#include "chromacomm/errors.hpp"
#include "chromacomm/party.hpp"
#include "chromacomm/prng.hpp"

namespace chromacomm {

// Wire format.  Handshake: each side sends the 8-byte big-endian fingerprint
// of its shared seed; a mismatch aborts the session before any protocol bits
// flow.  Message frame:
//   1 byte  sender (0 = Alice, 1 = Bob)
//   2 bytes big-endian label length, then the UTF-8 label
//   4 bytes big-endian payload width in bits
//   ceil(width/8) payload bytes, value MSB-first, zero-padded in the last byte
// Only payload bits count toward the transcript; framing overhead is tracked
// separately.

namespace wire {

inline void put_be(std::vector<std::uint8_t>& out, std::uint64_t value, int bytes) {
  for (int i = bytes - 1; i >= 0; --i)
    out.push_back(static_cast<std::uint8_t>((value >> (8 * i)) & 0xFF));
}

inline std::vector<std::uint8_t> pack_frame(Party sender, std::string_view label,
                                            std::uint64_t value, int width) {
  check_config(width >= 1 && width <= 64, "pack_frame: width must be in 1..64");
  check_config(width == 64 || value < (1ULL << width), "pack_frame: value does not fit width");
  check_config(label.size() <= 0xFFFF, "pack_frame: label too long");
  std::vector<std::uint8_t> out;
  out.push_back(static_cast<std::uint8_t>(sender));
  put_be(out, label.size(), 2);
  out.insert(out.end(), label.begin(), label.end());
  put_be(out, static_cast<std::uint64_t>(width), 4);
  const int nbytes = (width + 7) / 8;
  const int pad = 8 * nbytes - width;
  const std::uint64_t shifted = value << pad;
  put_be(out, shifted, nbytes);
  return out;
}

struct Frame {
  Party sender = Party::alice;
  std::string label;
  std::uint64_t value = 0;
  int width = 0;
};

}  // namespace wire

namespace detail {

struct FdGuard {
  int fd = -1;
  FdGuard() = default;
  explicit FdGuard(int f) : fd(f) {}
  FdGuard(FdGuard&& o) noexcept : fd(o.fd) { o.fd = -1; }
  FdGuard& operator=(FdGuard&& o) noexcept {
    if (this != &o) {
      reset();
      fd = o.fd;
      o.fd = -1;
    }
    return *this;
  }
  FdGuard(const FdGuard&) = delete;
  FdGuard& operator=(const FdGuard&) = delete;
  ~FdGuard() { reset(); }
  void reset() {
    if (fd >= 0) ::close(fd);
    fd = -1;
  }
};

inline void write_all(int fd, const std::uint8_t* data, std::size_t len) {
  while (len > 0) {
    const ssize_t w = ::write(fd, data, len);
    if (w < 0) {
      if (errno == EINTR) continue;
      throw io_error(std::string("socket write failed: ") + std::strerror(errno));
    }
    data += w;
    len -= static_cast<std::size_t>(w);
  }
}

inline void read_all(int fd, std::uint8_t* data, std::size_t len) {
  while (len > 0) {
    const ssize_t r = ::read(fd, data, len);
    if (r < 0) {
      if (errno == EINTR) continue;
      throw io_error(std::string("socket read failed: ") + std::strerror(errno));
    }
    check_io(r != 0, "socket closed mid-session");
    data += r;
    len -= static_cast<std::size_t>(r);
  }
}

inline std::uint64_t read_be(int fd, int bytes) {
  std::uint8_t buf[8] = {};
  read_all(fd, buf, static_cast<std::size_t>(bytes));
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v = (v << 8) | buf[i];
  return v;
}

}  // namespace detail

// One endpoint of a two-party session over a connected stream socket.  The
// protocol code is the same as in-memory; only this endpoint's private state
// exists here, and the peer's messages arrive over the wire.
class SocketSession : public Session {
 public:
  SocketSession(int fd, Party local, std::uint64_t shared_seed)
      : fd_(fd), local_(local), stream_(shared_seed) {
    const std::uint64_t fingerprint = mix64(shared_seed);
    std::vector<std::uint8_t> hello;
    wire::put_be(hello, fingerprint, 8);
    detail::write_all(fd_.fd, hello.data(), hello.size());
    const std::uint64_t peer = detail::read_be(fd_.fd, 8);
    wire_bytes_ += 16;
    check_io(peer == fingerprint, "session seed mismatch between endpoints");
  }

  Party local_party() const { return local_; }
  bool has_state_for(Party p) const override { return p == local_; }

  // Bytes that crossed the wire in either direction (handshake + framing +
  // payload); the transcript's total_bits counts payload bits only.
  std::uint64_t wire_bytes() const { return wire_bytes_; }
  std::uint64_t framing_overhead_bits() const { return 8 * wire_bytes_ - total_bits(); }

 protected:
  std::uint64_t do_exchange(Party sender, std::string_view label, int width,
                            function_ref<std::uint64_t()> produce) override {
    if (sender == local_) {
      const std::uint64_t value = produce();
      const auto frame = wire::pack_frame(sender, label, value, width);
      detail::write_all(fd_.fd, frame.data(), frame.size());
      wire_bytes_ += frame.size();
      return value;
    }
    const wire::Frame frame = read_frame();
    check_io(frame.sender == sender && frame.label == label && frame.width == width,
             "protocol desync: received frame does not match the expected message");
    return frame.value;
  }

  std::uint64_t draw_u64() override { return stream_.next_u64(); }

 private:
  wire::Frame read_frame() {
    wire::Frame frame;
    const std::uint64_t sender_byte = detail::read_be(fd_.fd, 1);
    check_io(sender_byte <= 1, "frame corruption: bad sender byte");
    frame.sender = static_cast<Party>(sender_byte);
    const auto label_len = static_cast<std::size_t>(detail::read_be(fd_.fd, 2));
    frame.label.resize(label_len);
    if (label_len > 0)
      detail::read_all(fd_.fd, reinterpret_cast<std::uint8_t*>(frame.label.data()), label_len);
    const std::uint64_t width = detail::read_be(fd_.fd, 4);
    check_io(width >= 1 && width <= 64, "frame corruption: bad payload width");
    frame.width = static_cast<int>(width);
    const int nbytes = (frame.width + 7) / 8;
    const std::uint64_t raw = detail::read_be(fd_.fd, nbytes);
    const int pad = 8 * nbytes - frame.width;
    check_io(pad == 0 || (raw & ((1ULL << pad) - 1)) == 0,
             "frame corruption: nonzero padding bits");
    frame.value = raw >> pad;
    wire_bytes_ += 1 + 2 + label_len + 4 + static_cast<std::size_t>(nbytes);
    return frame;
  }

  detail::FdGuard fd_;
  Party local_;
  SharedRandomStream stream_;
  std::uint64_t wire_bytes_ = 0;
};

// Two already-connected loopback TCP sockets, for running both endpoints of a
// socket session inside one process.
inline std::pair<int, int> make_loopback_socket_pair() {
  detail::FdGuard listener(::socket(AF_INET, SOCK_STREAM, 0));
  check_io(listener.fd >= 0, "socket() failed");
  int one = 1;
  ::setsockopt(listener.fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = 0;
  check_io(::bind(listener.fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) == 0,
           "bind() failed");
  check_io(::listen(listener.fd, 1) == 0, "listen() failed");
  socklen_t len = sizeof(addr);
  check_io(::getsockname(listener.fd, reinterpret_cast<sockaddr*>(&addr), &len) == 0,
           "getsockname() failed");

  detail::FdGuard client(::socket(AF_INET, SOCK_STREAM, 0));
  check_io(client.fd >= 0, "socket() failed");
  check_io(::connect(client.fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) == 0,
           "loopback connect() failed");
  const int accepted = ::accept(listener.fd, nullptr, nullptr);
  check_io(accepted >= 0, "accept() failed");

  for (int fd : {client.fd, accepted}) ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  const int client_fd = client.fd;
  client.fd = -1;  // ownership passes to the caller
  return {client_fd, accepted};
}

// Opens one endpoint by address ("host:port").  Bob binds and accepts a
// single connection; Alice connects, retrying briefly while the listener
// comes up.
inline std::unique_ptr<SocketSession> open_socket_session(Party role, const std::string& address,
                                                          std::uint64_t shared_seed) {
  const auto colon = address.rfind(':');
  check_config(colon != std::string::npos, "open_socket_session: address must be host:port");
  const std::string host = address.substr(0, colon);
  const int port = std::stoi(address.substr(colon + 1));
  check_config(port > 0 && port < 65536, "open_socket_session: bad port");

  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(static_cast<std::uint16_t>(port));
  check_io(::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) == 1,
           "open_socket_session: bad IPv4 host");

  int one = 1;
  if (role == Party::bob) {
    detail::FdGuard listener(::socket(AF_INET, SOCK_STREAM, 0));
    check_io(listener.fd >= 0, "socket() failed");
    ::setsockopt(listener.fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    check_io(::bind(listener.fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) == 0,
             "bind() failed (is the port free?)");
    check_io(::listen(listener.fd, 1) == 0, "listen() failed");
    const int fd = ::accept(listener.fd, nullptr, nullptr);
    check_io(fd >= 0, "accept() failed");
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
    return std::make_unique<SocketSession>(fd, Party::bob, shared_seed);
  }

  for (int attempt = 0;; ++attempt) {
    detail::FdGuard fd(::socket(AF_INET, SOCK_STREAM, 0));
    check_io(fd.fd >= 0, "socket() failed");
    if (::connect(fd.fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) == 0) {
      ::setsockopt(fd.fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
      const int raw = fd.fd;
      fd.fd = -1;
      return std::make_unique<SocketSession>(raw, Party::alice, shared_seed);
    }
    check_io(attempt < 200, std::string("connect failed: ") + std::strerror(errno));
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
}

}  // namespace chromacomm
