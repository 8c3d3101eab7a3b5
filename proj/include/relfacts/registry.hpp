// Copyright 2026 The relfacts Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Named subsystems with a fixed tensor ordering.
 */
#pragma once

#include "relfacts/error.hpp"
#include "relfacts/linalg.hpp"

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace relfacts {

/// Role tag for a system, following the usual cast of a friend scenario.
enum class Role { None, System, Friend, Environment, Wigner };

inline const char *role_name(Role r) {
    switch (r) {
    case Role::System:
        return "S";
    case Role::Friend:
        return "F";
    case Role::Environment:
        return "E";
    case Role::Wigner:
        return "W";
    case Role::None:
        break;
    }
    return "";
}

inline Role role_from_name(const std::string &s) {
    if (s.empty()) {
        return Role::None;
    }
    if (s == "S") {
        return Role::System;
    }
    if (s == "F") {
        return Role::Friend;
    }
    if (s == "E") {
        return Role::Environment;
    }
    if (s == "W") {
        return Role::Wigner;
    }
    throw ValidationError("unknown role tag '" + s + "'");
}

struct SystemInfo {
    std::string label;
    std::size_t dim = 0;
    Role role = Role::None;
};

/// Ordered list of subsystems. Registration order is tensor order: the first
/// registered system is the most significant digit of a composite index.
class SystemRegistry {
  public:
    SystemRegistry &add(const std::string &label, std::size_t dim,
                        Role role = Role::None) {
        if (label.empty()) {
            throw ValidationError("system label must be nonempty");
        }
        if (dim < 1) {
            throw ValidationError("system '" + label + "' needs dim >= 1");
        }
        if (contains(label)) {
            throw ValidationError("duplicate system label '" + label + "'");
        }
        systems_.push_back({label, dim, role});
        return *this;
    }

    [[nodiscard]] std::size_t size() const noexcept { return systems_.size(); }
    [[nodiscard]] bool empty() const noexcept { return systems_.empty(); }
    [[nodiscard]] const SystemInfo &at(std::size_t i) const { return systems_.at(i); }
    [[nodiscard]] std::span<const SystemInfo> systems() const noexcept {
        return systems_;
    }

    [[nodiscard]] bool contains(const std::string &label) const {
        for (const auto &s : systems_) {
            if (s.label == label) {
                return true;
            }
        }
        return false;
    }

    [[nodiscard]] std::size_t index_of(const std::string &label) const {
        for (std::size_t i = 0; i < systems_.size(); ++i) {
            if (systems_[i].label == label) {
                return i;
            }
        }
        throw ValidationError("unknown system '" + label + "'");
    }

    [[nodiscard]] std::size_t dim_of(const std::string &label) const {
        return systems_[index_of(label)].dim;
    }

    /// Product of the given systems' dims; saturates instead of overflowing.
    [[nodiscard]] std::size_t dim_of(std::span<const std::string> labels) const {
        std::size_t d = 1;
        for (const auto &l : labels) {
            d = saturating_mul(d, dim_of(l));
        }
        return d;
    }

    [[nodiscard]] std::size_t total_dim() const {
        std::size_t d = 1;
        for (const auto &s : systems_) {
            d = saturating_mul(d, s.dim);
        }
        return d;
    }

    /// Throws CapacityError when the composite space is above the state cap.
    void check_capacity() const { check_state_dim(total_dim(), "registry"); }

    /// Registry positions of the labels; they must be distinct and known.
    [[nodiscard]] std::vector<std::size_t>
    positions(std::span<const std::string> labels) const {
        std::vector<std::size_t> pos;
        pos.reserve(labels.size());
        for (const auto &l : labels) {
            const std::size_t p = index_of(l);
            for (std::size_t q : pos) {
                if (q == p) {
                    throw ValidationError("system '" + l + "' listed twice");
                }
            }
            pos.push_back(p);
        }
        return pos;
    }

    /// Labels of every system not in `labels`, in registry order.
    [[nodiscard]] std::vector<std::string>
    complement(std::span<const std::string> labels) const {
        std::vector<std::string> out;
        for (const auto &s : systems_) {
            bool found = false;
            for (const auto &l : labels) {
                found = found || (l == s.label);
            }
            if (!found) {
                out.push_back(s.label);
            }
        }
        return out;
    }

    /// `labels` reordered to follow registry order.
    [[nodiscard]] std::vector<std::string>
    in_registry_order(std::span<const std::string> labels) const {
        (void)positions(labels);
        std::vector<std::string> out;
        for (const auto &s : systems_) {
            for (const auto &l : labels) {
                if (l == s.label) {
                    out.push_back(l);
                }
            }
        }
        return out;
    }

    friend bool operator==(const SystemRegistry &a, const SystemRegistry &b) {
        if (a.systems_.size() != b.systems_.size()) {
            return false;
        }
        for (std::size_t i = 0; i < a.systems_.size(); ++i) {
            if (a.systems_[i].label != b.systems_[i].label ||
                a.systems_[i].dim != b.systems_[i].dim) {
                return false;
            }
        }
        return true;
    }

  private:
    static std::size_t saturating_mul(std::size_t a, std::size_t b) {
        if (a != 0 && b > std::numeric_limits<std::size_t>::max() / a) {
            return std::numeric_limits<std::size_t>::max();
        }
        return a * b;
    }

    std::vector<SystemInfo> systems_;
};

/// Value-returning registration.
inline SystemRegistry register_system(SystemRegistry registry,
                                      const std::string &label, std::size_t dim,
                                      Role role = Role::None) {
    registry.add(label, dim, role);
    return registry;
}

} // namespace relfacts
