#pragma once

#include <string>
#include <vector>

#include "locklab/mifare.hpp"

namespace locklab::ia210 {

using mifare::Block;
using mifare::MifareTag;

enum class DisarmOutcome { Disarmed, Rejected };
enum class PinOutcome { Disarmed, WrongPin };

// IA-210 intruder alarm. Tag authentication is default-key decryptability on
// every sector plus a block-0 match against the enrolled list; the tag is
// never written.
class Ia210Alarm {
public:
    explicit Ia210Alarm(std::string pin) : pin_(std::move(pin)) {}

    // Throws NonDefaultKeys or AlreadyEnrolled.
    void enroll_tag(const MifareTag& tag);

    DisarmOutcome present_tag(const MifareTag& tag);

    void arm() { armed_ = true; }
    PinOutcome disarm_pin(const std::string& pin);

    bool armed() const { return armed_; }
    const std::vector<Block>& enrolled_tags() const { return enrolled_; }

private:
    bool default_keys_everywhere(const MifareTag& tag) const;

    std::string pin_;
    bool armed_ = false;
    std::vector<Block> enrolled_;
};

}  // namespace locklab::ia210
