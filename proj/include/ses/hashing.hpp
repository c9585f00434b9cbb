// Copyright 2026 The SES Simulator Authors
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

#include <cstdint>
#include <cstring>
#include <iomanip>
#include <sstream>
#include <string>
#include <string_view>
#include <type_traits>

#include <Eigen/Core>

namespace ses {

/// 64-bit FNV-1a, used for workload and input-file content hashes.
class Fnv1a {
public:
    Fnv1a& update(const void* data, std::size_t size) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t k = 0; k < size; ++k) {
            state_ ^= p[k];
            state_ *= 0x100000001b3ull;
        }
        return *this;
    }

    Fnv1a& update(std::string_view s) { return update(s.data(), s.size()); }

    template <typename T>
        requires std::is_trivially_copyable_v<T>
    Fnv1a& update_value(const T& v) {
        return update(&v, sizeof(T));
    }

    template <typename Derived>
    Fnv1a& update_matrix(const Eigen::DenseBase<Derived>& m) {
        update_value(static_cast<std::int64_t>(m.rows()));
        update_value(static_cast<std::int64_t>(m.cols()));
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            for (Eigen::Index i = 0; i < m.rows(); ++i) update_value(m(i, j));
        return *this;
    }

    std::uint64_t digest() const noexcept { return state_; }

    std::string hex() const {
        std::ostringstream os;
        os << std::hex << std::setw(16) << std::setfill('0') << state_;
        return os.str();
    }

private:
    std::uint64_t state_ = 0xcbf29ce484222325ull;
};

}  // namespace ses
