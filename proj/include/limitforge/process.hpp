// Resumable streams and budgeted semi-decision processes.
//
// Every enumerator in the library is a Generator: a lazily evaluated,
// single-consumer stream that can be paused between elements and resumed.
// A Process is a generator of Steps; each step reports how much work it
// did and optionally carries a result, which lets callers interleave
// several processes fairly under one step budget.

#ifndef LIMITFORGE_PROCESS_HPP_
#define LIMITFORGE_PROCESS_HPP_

#include <algorithm>
#include <coroutine>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <iterator>
#include <optional>
#include <utility>

namespace limitforge {

// Coroutine parameters must be taken by value: the frame outlives the call.
template <typename T>
class Generator {
 public:
  struct promise_type {
    std::optional<T> current;
    std::exception_ptr error;

    Generator get_return_object() {
      return Generator(std::coroutine_handle<promise_type>::from_promise(*this));
    }
    std::suspend_always initial_suspend() noexcept { return {}; }
    std::suspend_always final_suspend() noexcept { return {}; }
    std::suspend_always yield_value(T value) {
      current.emplace(std::move(value));
      return {};
    }
    void return_void() noexcept {}
    void unhandled_exception() { error = std::current_exception(); }
  };

  Generator() = default;
  Generator(Generator&& other) noexcept : handle_(std::exchange(other.handle_, {})) {}
  Generator& operator=(Generator&& other) noexcept {
    if (this != &other) {
      reset();
      handle_ = std::exchange(other.handle_, {});
    }
    return *this;
  }
  Generator(const Generator&) = delete;
  Generator& operator=(const Generator&) = delete;
  ~Generator() { reset(); }

  bool valid() const noexcept { return static_cast<bool>(handle_); }

  // Next element, or nullopt once the stream is exhausted.
  std::optional<T> next() {
    if (!handle_ || handle_.done()) return std::nullopt;
    handle_.promise().current.reset();
    handle_.resume();
    if (handle_.promise().error) {
      auto e = std::exchange(handle_.promise().error, nullptr);
      std::rethrow_exception(e);
    }
    if (handle_.done()) return std::nullopt;
    return std::move(handle_.promise().current);
  }

  class iterator {
   public:
    using value_type = T;
    using difference_type = std::ptrdiff_t;
    iterator() = default;
    explicit iterator(Generator* g) : gen_(g) { ++*this; }
    const T& operator*() const { return *value_; }
    const T* operator->() const { return &*value_; }
    iterator& operator++() {
      value_ = gen_->next();
      return *this;
    }
    void operator++(int) { ++*this; }
    bool operator==(std::default_sentinel_t) const { return !value_.has_value(); }

   private:
    Generator* gen_ = nullptr;
    std::optional<T> value_;
  };
  iterator begin() { return iterator(this); }
  std::default_sentinel_t end() { return {}; }

 private:
  explicit Generator(std::coroutine_handle<promise_type> h) : handle_(h) {}
  void reset() {
    if (handle_) handle_.destroy();
    handle_ = {};
  }
  std::coroutine_handle<promise_type> handle_;
};

template <typename T>
struct Step {
  std::uint64_t work = 1;
  std::optional<T> value;
};

template <typename T>
using Process = Generator<Step<T>>;

class Budget {
 public:
  static constexpr std::uint64_t kUnbounded = UINT64_MAX;

  explicit Budget(std::uint64_t limit = kUnbounded) : limit_(limit) {}

  std::uint64_t limit() const noexcept { return limit_; }
  std::uint64_t used() const noexcept { return used_; }
  std::uint64_t remaining() const noexcept { return limit_ - std::min(used_, limit_); }
  bool exhausted() const noexcept { return used_ >= limit_; }
  void charge(std::uint64_t work) noexcept {
    used_ = (UINT64_MAX - used_ < work) ? UINT64_MAX : used_ + work;
  }

 private:
  std::uint64_t limit_;
  std::uint64_t used_ = 0;
};

// Drives a process until it yields a value, finishes, or the budget runs out.
template <typename T>
std::optional<T> run(Process<T>& p, Budget& budget) {
  while (!budget.exhausted()) {
    auto step = p.next();
    if (!step) return std::nullopt;
    budget.charge(step->work);
    if (step->value) return std::move(step->value);
  }
  return std::nullopt;
}

}  // namespace limitforge

#endif  // LIMITFORGE_PROCESS_HPP_
