#pragma once

#include <stdexcept>
#include <string>

namespace nicert {

// Base class for all library errors.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

// eval_at hit a point where a denominator vanishes.
class EvalAtPole : public Error {
   public:
    using Error::Error;
};

// scaled_origin_limit called with k below the origin pole order.
class LimitDiverges : public Error {
   public:
    using Error::Error;
};

// spectral() was told to expect a real spectrum and found otherwise.
class ComplexSpectrum : public Error {
   public:
    using Error::Error;
};

// Operation requires membership in RH-infinity.
class NotStableError : public Error {
   public:
    using Error::Error;
};

// Feedback interconnection is not well posed.
class IllPosedError : public Error {
   public:
    using Error::Error;
};

// A caller-side precondition (classification, pole structure) failed.
class PreconditionViolated : public Error {
   public:
    using Error::Error;
};

// The Psi parameter does not satisfy its admissibility conditions.
class PsiInvalid : public Error {
   public:
    using Error::Error;
};

// Controller handed to the converse checks is not stable.
class ControllerUnstable : public Error {
   public:
    using Error::Error;
};

// The violation falls in the documented out-of-scope construction.
class NotSynthesizable : public Error {
   public:
    using Error::Error;
};

// A synthesized counterexample failed one of its verification clauses.
class VerificationFailed : public Error {
   public:
    VerificationFailed(std::string clause, const std::string& what)
        : Error(what), clause_(std::move(clause)) {}
    const std::string& clause() const { return clause_; }

   private:
    std::string clause_;
};

// Rejection sampling gave up.
class SamplerExhausted : public Error {
   public:
    using Error::Error;
};

// A sampled in-class plant destabilized a controller that passed the
// necessity conditions.  Must never happen; fails loudly.
class SufficiencyCounterexample : public Error {
   public:
    using Error::Error;
};

}  // namespace nicert
