/* Copyright 2026 The gprop Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <condition_variable>
#include <cstring>
#include <deque>
#include <mutex>
#include <optional>

#include "gprc_format.hpp"
#include "gprop/distributed.hpp"
#include "gprop/error.hpp"

namespace gprop {

std::uint64_t SyncMessage::values() const noexcept {
  std::uint64_t n = 0;
  for (const auto& c : channels) std::visit([&](const auto& v) { n += v.size(); }, c);
  return n;
}

namespace {
constexpr std::size_t kHeaderBytes = 4 + 2 + 4 + 4;
}

std::vector<unsigned char> encode_frame(const SyncMessage& msg) {
  std::vector<unsigned char> out;
  out.reserve(4 + kHeaderBytes + msg.values() * 8);
  detail::put_u32(out, 0);  // patched below
  detail::put_u32(out, msg.step);
  detail::put_u16(out, msg.part);
  detail::put_u32(out, msg.lane_lo);
  detail::put_u32(out, msg.lane_hi);
  for (const auto& c : msg.channels) {
    if (const auto* d = std::get_if<std::vector<std::uint8_t>>(&c)) {
      out.insert(out.end(), d->begin(), d->end());
    } else {
      for (double x : std::get<std::vector<double>>(c)) detail::put_f64(out, x);
    }
  }
  const std::size_t body = out.size() - 4;
  if (body > UINT32_MAX) fail(ErrorKind::Protocol, "sync frame exceeds 4 GiB");
  for (int i = 0; i < 4; ++i) out[static_cast<std::size_t>(i)] = static_cast<unsigned char>(body >> (8 * i));
  return out;
}

SyncMessage decode_frame(std::span<const unsigned char> frame, std::span<const ChannelDesc> channels,
                         std::size_t rows) {
  try {
    detail::ByteReader in(frame.data(), frame.size(), "sync frame");
    const std::uint32_t length = in.u32();
    if (length != frame.size() - 4) fail(ErrorKind::Protocol, "sync frame length field does not match frame size");
    SyncMessage msg;
    msg.step = in.u32();
    msg.part = in.u16();
    msg.lane_lo = in.u32();
    msg.lane_hi = in.u32();
    if (msg.lane_hi < msg.lane_lo) fail(ErrorKind::Protocol, "sync frame has an inverted lane range");
    const std::size_t cells = rows * (msg.lane_hi - msg.lane_lo);
    std::size_t expected = 0;
    for (const auto& c : channels) expected += cells * (c.kind == ChannelKind::Discrete ? 1 : 8);
    if (in.remaining() != expected) fail(ErrorKind::Protocol, "sync frame payload has the wrong size");
    for (const auto& c : channels) {
      if (c.kind == ChannelKind::Discrete) {
        std::vector<std::uint8_t> v(cells);
        in.bytes(v.data(), cells);
        msg.channels.emplace_back(std::move(v));
      } else {
        std::vector<double> v(cells);
        for (auto& x : v) x = in.f64();
        msg.channels.emplace_back(std::move(v));
      }
    }
    return msg;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Protocol) throw;
    fail(ErrorKind::Protocol, e.what());
  }
}

namespace {

class InProcessTransport final : public Transport {
 public:
  explicit InProcessTransport(std::size_t workers) : slots_(workers) {}

  void send(std::uint32_t worker, SyncMessage msg) override {
    auto& s = slots_.at(worker);
    {
      std::lock_guard lock(s.mutex);
      s.queue.push_back(std::move(msg));
    }
    s.cv.notify_one();
  }

  void send_failure(std::uint32_t worker, const std::string& what) override {
    auto& s = slots_.at(worker);
    {
      std::lock_guard lock(s.mutex);
      s.failure = what;
    }
    s.cv.notify_one();
  }

  SyncMessage receive(std::uint32_t worker) override {
    auto& s = slots_.at(worker);
    std::unique_lock lock(s.mutex);
    s.cv.wait(lock, [&] { return !s.queue.empty() || s.failure || s.closed; });
    if (!s.queue.empty()) {
      auto msg = std::move(s.queue.front());
      s.queue.pop_front();
      return msg;
    }
    if (s.failure) fail(ErrorKind::Protocol, "worker " + std::to_string(worker + 1) + " failed: " + *s.failure);
    fail(ErrorKind::Protocol, "transport shut down");
  }

  void shutdown() override {
    for (auto& s : slots_) {
      {
        std::lock_guard lock(s.mutex);
        s.closed = true;
      }
      s.cv.notify_all();
    }
  }

 private:
  struct Slot {
    std::mutex mutex;
    std::condition_variable cv;
    std::deque<SyncMessage> queue;
    std::optional<std::string> failure;
    bool closed = false;
  };
  std::deque<Slot> slots_;
};

/// One AF_UNIX stream socket pair per worker; frames as in encode_frame.
class SocketTransport final : public Transport {
 public:
  SocketTransport(std::vector<ChannelDesc> channels, std::vector<std::size_t> rows)
      : channels_(std::move(channels)), rows_(std::move(rows)), links_(rows_.size()) {
    for (auto& link : links_) {
      int fds[2];
      if (::socketpair(AF_UNIX, SOCK_STREAM, 0, fds) != 0) {
        fail(ErrorKind::Io, std::string("socketpair failed: ") + std::strerror(errno));
      }
      link.coordinator_fd = fds[0];
      link.worker_fd = fds[1];
    }
  }

  ~SocketTransport() override {
    for (auto& link : links_) {
      ::close(link.coordinator_fd);
      ::close(link.worker_fd);
    }
  }

  void send(std::uint32_t worker, SyncMessage msg) override {
    const auto frame = encode_frame(msg);
    const int fd = links_.at(worker).worker_fd;
    std::size_t off = 0;
    while (off < frame.size()) {
      const auto n = ::send(fd, frame.data() + off, frame.size() - off, MSG_NOSIGNAL);
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) fail(ErrorKind::Protocol, std::string("socket send failed: ") + std::strerror(errno));
      off += static_cast<std::size_t>(n);
    }
  }

  void send_failure(std::uint32_t worker, const std::string& what) override {
    auto& link = links_.at(worker);
    {
      std::lock_guard lock(mutex_);
      link.failure = what;
    }
    ::shutdown(link.worker_fd, SHUT_WR);
  }

  SyncMessage receive(std::uint32_t worker) override {
    auto& link = links_.at(worker);
    unsigned char len_bytes[4];
    if (!read_exact(link.coordinator_fd, len_bytes, 4)) closed(worker);
    const std::uint32_t length = static_cast<std::uint32_t>(len_bytes[0]) | (static_cast<std::uint32_t>(len_bytes[1]) << 8) |
                                 (static_cast<std::uint32_t>(len_bytes[2]) << 16) |
                                 (static_cast<std::uint32_t>(len_bytes[3]) << 24);
    std::vector<unsigned char> frame(4 + static_cast<std::size_t>(length));
    std::memcpy(frame.data(), len_bytes, 4);
    if (!read_exact(link.coordinator_fd, frame.data() + 4, length)) closed(worker);
    return decode_frame(frame, channels_, rows_[worker]);
  }

  void shutdown() override {
    for (auto& link : links_) {
      ::shutdown(link.coordinator_fd, SHUT_RDWR);
      ::shutdown(link.worker_fd, SHUT_RDWR);
    }
  }

 private:
  struct Link {
    int coordinator_fd = -1;
    int worker_fd = -1;
    std::optional<std::string> failure;
  };

  static bool read_exact(int fd, unsigned char* out, std::size_t n) {
    std::size_t off = 0;
    while (off < n) {
      const auto r = ::recv(fd, out + off, n - off, 0);
      if (r < 0 && errno == EINTR) continue;
      if (r <= 0) return false;
      off += static_cast<std::size_t>(r);
    }
    return true;
  }

  [[noreturn]] void closed(std::uint32_t worker) {
    std::lock_guard lock(mutex_);
    const auto& failure = links_[worker].failure;
    if (failure) fail(ErrorKind::Protocol, "worker " + std::to_string(worker + 1) + " failed: " + *failure);
    fail(ErrorKind::Protocol, "worker " + std::to_string(worker + 1) + " closed its connection");
  }

  std::vector<ChannelDesc> channels_;
  std::vector<std::size_t> rows_;
  std::vector<Link> links_;
  std::mutex mutex_;
};

}  // namespace

std::unique_ptr<Transport> make_transport(TransportKind kind, std::vector<ChannelDesc> channels,
                                          std::vector<std::size_t> rows_per_worker) {
  if (kind == TransportKind::Socket) {
    return std::make_unique<SocketTransport>(std::move(channels), std::move(rows_per_worker));
  }
  return std::make_unique<InProcessTransport>(rows_per_worker.size());
}

}  // namespace gprop
