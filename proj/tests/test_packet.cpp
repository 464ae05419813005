#include <catch2/catch_amalgamated.hpp>

#include "dsrsim/dsrsim.hpp"

using namespace dsrsim;

TEST_CASE("data frame size is payload plus four bytes per route node", "[packet]") {
    DataPacket d;
    d.payload_size = 64;
    d.source_route = Route{0, 1, 2};
    REQUIRE(wire_size(Packet{d}) == 64 + 4 * 3);
    d.source_route = Route{0, 1};
    REQUIRE(wire_size(Packet{d}) == 64 + 4 * 2);
    d.payload_size = 512;
    REQUIRE(wire_size(Packet{d}) == 512 + 8);
}

TEST_CASE("request frame size grows with the accumulated path", "[packet]") {
    RouteRequest r;
    r.accumulated = {0};
    REQUIRE(wire_size(Packet{r}) == 16 + 4);
    r.accumulated = {0, 1, 2, 3};
    REQUIRE(wire_size(Packet{r}) == 16 + 16);
}

TEST_CASE("reply frame size counts the carried route", "[packet]") {
    RouteReply r;
    r.route = Route{0, 1, 2, 3, 4};
    REQUIRE(wire_size(Packet{r}) == 16 + 20);
}

TEST_CASE("error frame size counts the broken pair plus the return path", "[packet]") {
    RouteError e;
    e.broken_from = 2;
    e.broken_to = 3;
    e.path = {2, 1, 0};
    REQUIRE(wire_size(Packet{e}) == 16 + 4 * (2 + 3));
    e.path = {2, 0};
    REQUIRE(wire_size(Packet{e}) == 16 + 4 * (2 + 2));
}

TEST_CASE("route helpers: position, slicing, reversal", "[packet]") {
    Route r{10, 20, 30, 40};
    REQUIRE(r.length() == 4);
    REQUIRE(r.hop_count() == 3);
    REQUIRE(r.front() == 10);
    REQUIRE(r.back() == 40);
    REQUIRE(r.index_of(30) == 2);
    REQUIRE(r.index_of(99) == Route::npos);
    REQUIRE(r.prefix(2) == Route{10, 20, 30});
    REQUIRE(r.suffix(2) == Route{30, 40});
    REQUIRE(r.reversed() == Route{40, 30, 20, 10});
    REQUIRE(concat(Route{10, 20}, Route{30}) == Route{10, 20, 30});
    REQUIRE(r.str() == "10-20-30-40");
}

TEST_CASE("loop detection", "[packet]") {
    REQUIRE(Route{1, 2, 3}.loop_free());
    REQUIRE_FALSE(Route{1, 2, 1}.loop_free());
    REQUIRE_FALSE(Route{1, 2, 2}.loop_free());
    REQUIRE(Route{}.loop_free());
}
