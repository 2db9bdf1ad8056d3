#include "shardsim/message.hpp"

#include "shardsim/codec.hpp"

namespace shardsim {

const char* to_string(MsgKind k) {
    switch (k) {
        case MsgKind::SubmitTx: return "submit";
        case MsgKind::SbacPreAccept: return "sbac_pre_accept";
        case MsgKind::SbacPreAbort: return "sbac_pre_abort";
        case MsgKind::SbacAccept: return "sbac_accept";
        case MsgKind::SbacAbort: return "sbac_abort";
        case MsgKind::AtomixPreAccept: return "atomix_pre_accept";
        case MsgKind::AtomixPreAbort: return "atomix_pre_abort";
        case MsgKind::AtomixAccept: return "atomix_accept";
        case MsgKind::AtomixAbort: return "atomix_abort";
        case MsgKind::ByzPreAccept: return "byz_pre_accept";
        case MsgKind::ByzPreAbort: return "byz_pre_abort";
        case MsgKind::ByzAccept: return "byz_accept";
        case MsgKind::ByzAbort: return "byz_abort";
        case MsgKind::VoteRequest: return "vote_request";
        case MsgKind::Notify: return "notify";
        case MsgKind::Timer: return "timer";
    }
    return "?";
}

bool is_vote(MsgKind k) {
    switch (k) {
        case MsgKind::SbacPreAccept:
        case MsgKind::SbacPreAbort:
        case MsgKind::AtomixPreAccept:
        case MsgKind::AtomixPreAbort:
        case MsgKind::ByzPreAccept:
        case MsgKind::ByzPreAbort: return true;
        default: return false;
    }
}

bool is_decision(MsgKind k) {
    switch (k) {
        case MsgKind::SbacAccept:
        case MsgKind::SbacAbort:
        case MsgKind::AtomixAccept:
        case MsgKind::AtomixAbort:
        case MsgKind::ByzAccept:
        case MsgKind::ByzAbort: return true;
        default: return false;
    }
}

bool is_protocol_message(MsgKind k) { return k != MsgKind::Timer; }

bool same_payload(const Message& a, const Message& b) {
    return encode_message(a) == encode_message(b);
}

}  // namespace shardsim
