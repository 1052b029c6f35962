// Copyright 2026 The dplreg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPLREG_ERRORS_HPP_
#define DPLREG_ERRORS_HPP_

#include <stdexcept>

namespace dplreg {

// Base class for every error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Graph construction and validation.
class InvalidEdge : public Error { public: using Error::Error; };
class DisconnectedGraph : public Error { public: using Error::Error; };

// Datasets and linear algebra.
class InsufficientRows : public Error { public: using Error::Error; };
class RankDeficient : public Error { public: using Error::Error; };
class DimensionMismatch : public Error { public: using Error::Error; };
class ShapeMismatch : public Error { public: using Error::Error; };
class BoundViolation : public Error { public: using Error::Error; };

// Randomness.
class NonPositiveScale : public Error { public: using Error::Error; };

// Schedules and parameter validation.
class InvalidParams : public Error { public: using Error::Error; };
class RegimeViolation : public Error { public: using Error::Error; };

// Simulation.
class NonFiniteState : public Error { public: using Error::Error; };

// Privacy auditing.
class NotAdjacent : public Error { public: using Error::Error; };
class ConfigMismatch : public Error { public: using Error::Error; };
class NonAuditable : public Error { public: using Error::Error; };
class InsufficientTrials : public Error { public: using Error::Error; };

// Experiments.
class EmptyWindow : public Error { public: using Error::Error; };

// Configuration and file IO.
class ConfigError : public Error { public: using Error::Error; };
class IoError : public Error { public: using Error::Error; };

}  // namespace dplreg

#endif  // DPLREG_ERRORS_HPP_
