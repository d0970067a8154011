#pragma once

#include <stdexcept>
#include <string>

namespace locklab {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Tag-level protocol errors.
struct WrongKey : Error { WrongKey() : Error("wrong key") {} };
struct OutOfSector : Error { OutOfSector() : Error("access handle does not cover block") {} };
struct ManufacturerBlockLocked : Error { ManufacturerBlockLocked() : Error("block 0 is read-only on non-magic tags") {} };

// Parse errors.
struct MalformedRow : Error { explicit MalformedRow(const std::string& m) : Error("malformed row: " + m) {} };
struct MalformedHex : Error { explicit MalformedHex(const std::string& m) : Error("malformed hex: " + m) {} };
struct MalformedLine : Error { explicit MalformedLine(const std::string& m) : Error("malformed line: " + m) {} };

// Device errors.
struct SessionAlreadyOpen : Error { SessionAlreadyOpen() : Error("session already open") {} };
struct SessionClosedError : Error { SessionClosedError() : Error("session closed") {} };
struct AuthFailure : Error { AuthFailure() : Error("card authentication failed") {} };
struct NonDefaultKeys : Error { NonDefaultKeys() : Error("tag does not use default keys") {} };
struct AlreadyEnrolled : Error { AlreadyEnrolled() : Error("tag already enrolled") {} };

// Attacker errors.
struct OutOfRange : Error { OutOfRange() : Error("attacker not in radio range") {} };
struct BudgetExceeded : Error { BudgetExceeded() : Error("key recovery exceeds tag access time") {} };
struct IncompleteDump : Error { IncompleteDump() : Error("dump does not cover all 64 blocks") {} };
struct BlockSetMismatch : Error { BlockSetMismatch() : Error("dumps cover different block sets") {} };

// Scenario errors.
struct UnknownScenario : Error { explicit UnknownScenario(const std::string& n) : Error("unknown scenario: " + n) {} };

}  // namespace locklab
