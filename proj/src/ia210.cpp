#include "locklab/ia210.hpp"

#include <algorithm>

#include "locklab/errors.hpp"

namespace locklab::ia210 {

using mifare::KeySlot;
using mifare::SectorKey;

bool Ia210Alarm::default_keys_everywhere(const MifareTag& tag) const {
    for (int s = 0; s < mifare::kSectorCount; ++s)
        if (!tag.authenticate(s, SectorKey::default_key(), KeySlot::A)) return false;
    return true;
}

void Ia210Alarm::enroll_tag(const MifareTag& tag) {
    if (!default_keys_everywhere(tag)) throw NonDefaultKeys{};
    auto h0 = *tag.authenticate(0, SectorKey::default_key(), KeySlot::A);
    Block uid = tag.read_block(h0, 0);
    if (std::find(enrolled_.begin(), enrolled_.end(), uid) != enrolled_.end())
        throw AlreadyEnrolled{};
    enrolled_.push_back(uid);
}

DisarmOutcome Ia210Alarm::present_tag(const MifareTag& tag) {
    if (!default_keys_everywhere(tag)) return DisarmOutcome::Rejected;
    auto h0 = *tag.authenticate(0, SectorKey::default_key(), KeySlot::A);
    Block uid = tag.read_block(h0, 0);
    if (std::find(enrolled_.begin(), enrolled_.end(), uid) == enrolled_.end())
        return DisarmOutcome::Rejected;
    armed_ = false;
    return DisarmOutcome::Disarmed;
}

PinOutcome Ia210Alarm::disarm_pin(const std::string& pin) {
    if (pin != pin_) return PinOutcome::WrongPin;
    armed_ = false;
    return PinOutcome::Disarmed;
}

}  // namespace locklab::ia210
