#include "doctest.h"

#include <random>

#include "shardsim/types.hpp"

using namespace shardsim;

TEST_SUITE_BEGIN("types");

TEST_CASE("shard_of maps plain ids by modulo") {
    CHECK(shard_of(make_object_id(0x7), 4) == 3);
    CHECK(shard_of(make_object_id(0x7), 1) == 0);
    CHECK(shard_of(make_object_id(12345), 1) == 0);
}

TEST_CASE("shard_of routes dummies to their minting shard") {
    ObjectId d = make_dummy_id(2, 17);
    CHECK(d.dummy);
    CHECK(shard_of(d, 4) == 2);
    CHECK(shard_of(make_dummy_id(0, 3), 4) == 0);
}

TEST_CASE("tx_sequence_number is the max of the input seqs") {
    CHECK(tx_sequence_number({3, 5, 2}) == 5);
    CHECK(tx_sequence_number({0, 0, 0}) == 0);
    CHECK(tx_sequence_number({7}) == 7);
    CHECK_THROWS_AS(tx_sequence_number({}), MalformedTransaction);
}

TEST_CASE("tx_sequence_number dominates every element") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<SeqNo> seqs;
        size_t n = 1 + rng() % 8;
        for (size_t i = 0; i < n; ++i) seqs.push_back(rng() % 1000);
        SeqNo s = tx_sequence_number(seqs);
        for (SeqNo v : seqs) CHECK(s >= v);
    }
}

TEST_CASE("validate_cert needs f+1 attestations") {
    ShardConfig cfg;
    cfg.max_faulty = 1;
    QuorumCert two = make_shard_cert(0, cfg, 1);
    CHECK(two.nodes.size() == 2);
    CHECK(validate_cert(two, cfg));

    QuorumCert forged = forge_cert(0, cfg, 1);
    CHECK(forged.nodes.size() == 1);
    CHECK_FALSE(validate_cert(forged, cfg));

    ShardConfig degenerate;
    degenerate.max_faulty = 0;
    QuorumCert one = make_shard_cert(0, degenerate, 1);
    CHECK(one.nodes.size() == 1);
    CHECK(validate_cert(one, degenerate));
}

TEST_CASE("the adversary's forge never validates") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        ShardConfig cfg;
        cfg.max_faulty = static_cast<uint32_t>(rng() % 5);
        cfg.nodes_per_shard = 3 * cfg.max_faulty + 1;
        ShardId shard = static_cast<ShardId>(rng() % 4);
        CHECK_FALSE(validate_cert(forge_cert(shard, cfg, rng()), cfg));
        CHECK(validate_cert(make_shard_cert(shard, cfg, rng()), cfg));
    }
}

TEST_CASE("duplicate attestations do not reach the threshold") {
    ShardConfig cfg;
    cfg.max_faulty = 1;
    QuorumCert cert;
    cert.shard = 0;
    cert.nodes = {0, 0, 0};
    CHECK_FALSE(validate_cert(cert, cfg));
}

TEST_CASE("shard partitions of a transaction") {
    Transaction txn;
    txn.id = 1;
    txn.inputs = {make_object_id(0), make_object_id(1)};               // shards 0, 1
    txn.outputs = {{make_object_id(3), 0}, {make_object_id(4), 1}, {make_object_id(5), 2}};
    CHECK(input_shards(txn, 3) == std::vector<ShardId>{0, 1});
    CHECK(concerned_shards(txn, 3) == std::vector<ShardId>{0, 1, 2});
    CHECK(output_only_shards(txn, 3) == std::vector<ShardId>{2});
}

TEST_CASE("well-formedness rejects duplicates and empty inputs") {
    Transaction txn;
    txn.id = 1;
    CHECK_FALSE(transaction_well_formed(txn, 3));
    txn.inputs = {make_object_id(0), make_object_id(0)};
    CHECK_FALSE(transaction_well_formed(txn, 3));
    txn.inputs = {make_object_id(0)};
    txn.outputs = {{make_object_id(3), 0}, {make_object_id(3), 0}};
    CHECK_FALSE(transaction_well_formed(txn, 3));
    txn.outputs = {{make_object_id(3), 0}};
    CHECK(transaction_well_formed(txn, 3));
}

TEST_SUITE_END();
