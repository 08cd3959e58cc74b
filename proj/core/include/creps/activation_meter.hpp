// Copyright 2026 The CREPS Toolkit Authors. All Rights Reserved.
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

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace creps {

// Counts live activation elements and their high-water mark. Single owner;
// synthesis only touches it from the calling thread.
class ActivationMeter {
 public:
  void acquire(std::uint64_t elements) {
    live_ += elements;
    total_ += elements;
    peak_ = std::max(peak_, live_);
  }
  void release(std::uint64_t elements) { live_ -= elements; }

  std::uint64_t live() const { return live_; }
  std::uint64_t peak() const { return peak_; }
  std::uint64_t total() const { return total_; }

 private:
  std::uint64_t live_ = 0;
  std::uint64_t peak_ = 0;
  std::uint64_t total_ = 0;
};

// An activation buffer that reports its lifetime to an optional meter.
template <typename T>
class TrackedBuffer {
 public:
  TrackedBuffer() = default;
  TrackedBuffer(std::size_t size, ActivationMeter* meter) : data_(size, T{0}), meter_(meter) {
    if (meter_) meter_->acquire(data_.size());
  }
  TrackedBuffer(std::vector<T> data, ActivationMeter* meter) : data_(std::move(data)), meter_(meter) {
    if (meter_) meter_->acquire(data_.size());
  }
  ~TrackedBuffer() { reset(); }

  TrackedBuffer(const TrackedBuffer&) = delete;
  TrackedBuffer& operator=(const TrackedBuffer&) = delete;
  TrackedBuffer(TrackedBuffer&& other) noexcept
      : data_(std::move(other.data_)), meter_(std::exchange(other.meter_, nullptr)) {
    other.data_.clear();
  }
  TrackedBuffer& operator=(TrackedBuffer&& other) noexcept {
    if (this != &other) {
      reset();
      data_ = std::move(other.data_);
      other.data_.clear();
      meter_ = std::exchange(other.meter_, nullptr);
    }
    return *this;
  }

  void reset() {
    if (meter_) meter_->release(data_.size());
    meter_ = nullptr;
    data_.clear();
    data_.shrink_to_fit();
  }

  // Hands the storage to the caller; the meter stops counting it.
  std::vector<T> release_storage() {
    if (meter_) meter_->release(data_.size());
    meter_ = nullptr;
    return std::move(data_);
  }

  std::size_t size() const { return data_.size(); }
  std::span<T> span() { return data_; }
  std::span<const T> span() const { return data_; }
  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }

 private:
  std::vector<T> data_;
  ActivationMeter* meter_ = nullptr;
};

}  // namespace creps
