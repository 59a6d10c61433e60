// Copyright 2026 The sslmotion Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Publisher-consumer plumbing between pipeline stages. A producer
// publishes immutable messages; the consumer picks them up on its next
// execution. Messages are variants and consumers dispatch with std::visit.

#ifndef SSLMOTION_PIPELINE_HPP_
#define SSLMOTION_PIPELINE_HPP_

#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

namespace sslm {

/// Latest-value slot: a newer publish replaces an unconsumed older one.
template <typename T>
class Mailbox {
 public:
  void publish(T value) {
    std::lock_guard lock(mutex_);
    slot_ = std::move(value);
    ++sequence_;
  }

  /// Takes the pending value, leaving the slot empty.
  std::optional<T> consume() {
    std::lock_guard lock(mutex_);
    std::optional<T> out = std::move(slot_);
    slot_.reset();
    return out;
  }

  std::optional<T> peek() const {
    std::lock_guard lock(mutex_);
    return slot_;
  }

  std::uint64_t sequence() const {
    std::lock_guard lock(mutex_);
    return sequence_;
  }

 private:
  mutable std::mutex mutex_;
  std::optional<T> slot_;
  std::uint64_t sequence_ = 0;
};

/// FIFO of messages; `drain` hands the whole backlog to the consumer in
/// publish order.
template <typename T>
class Inbox {
 public:
  void publish(T value) {
    std::lock_guard lock(mutex_);
    pending_.push_back(std::move(value));
  }

  std::vector<T> drain() {
    std::lock_guard lock(mutex_);
    std::vector<T> out;
    out.swap(pending_);
    return out;
  }

 private:
  std::mutex mutex_;
  std::vector<T> pending_;
};

/// Fans one published message out to every connected inbox.
template <typename T>
class Topic {
 public:
  void connect(Inbox<T> &inbox) { subscribers_.push_back(&inbox); }
  void publish(const T &value) const {
    for (Inbox<T> *s : subscribers_) s->publish(value);
  }

 private:
  std::vector<Inbox<T> *> subscribers_;
};

/// Overload set for std::visit over message variants.
template <typename... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <typename... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

}  // namespace sslm

#endif  // SSLMOTION_PIPELINE_HPP_
