#include <gtest/gtest.h>

#include <thread>

#include "dalert/error.hpp"
#include "dalert/field_client.hpp"
#include "dalert/http.hpp"
#include "fixtures.hpp"

using namespace dalert;
using namespace std::chrono_literals;

namespace {

class HttpTest : public ::testing::Test {
 protected:
  HttpTest()
      : service_(test::north_regions(), test::north_actors(), ServiceConfig{}, test::step_clock()),
        router_(service_),
        server_(router_) {
    server_.bind("127.0.0.1", 0);
    server_.start();
  }
  ~HttpTest() override { server_.stop(); }

  std::string url() const { return "http://127.0.0.1:" + std::to_string(server_.port()); }

  AlertService service_;
  ApiRouter router_;
  HttpServer server_;
};

}  // namespace

TEST_F(HttpTest, ResponsesMatchInProcessRouter) {
  HttpTransport http(url());
  InProcessTransport direct(router_);
  FieldClient client(http, [](auto) {});
  std::string id = client.submit(test::sangkalok_flood(), "k");
  for (const auto& req : std::vector<ApiRequest>{{"GET", "/reports/" + id, {}, {}},
                                                 {"GET", "/reports", {{"kind", "Flood"}}, {}},
                                                 {"GET", "/reports/R9", {}, {}},
                                                 {"GET", "/reports/" + id + "/cap", {{"sender", "89"}}, {}},
                                                 {"GET", "/permissions", {{"role", "INGO"}, {"state", "Verified"}}, {}},
                                                 {"GET", "/nowhere", {}, {}}}) {
    auto over_http = http.send(req);
    auto local = direct.send(req);
    EXPECT_EQ(over_http.status, local.status) << req.path;
    EXPECT_EQ(over_http.body, local.body) << req.path;
  }
}

TEST_F(HttpTest, TypedErrorsCrossTheWire) {
  HttpTransport http(url());
  FieldClient client(http, [](auto) {});
  EXPECT_THROW(client.submit(test::sangkalok_flood(20000), "bad"), ValidationError);
  try {
    client.get_report("R77");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownReport);
    EXPECT_EQ(e.subject(), "R77");
  }
}

TEST_F(HttpTest, CapImportOverHttp) {
  HttpTransport http(url());
  auto r = http.send(ApiRequest{"POST", "/cap", {}, test::listing_xml()});
  EXPECT_EQ(r.status, 200) << r.body;
  EXPECT_EQ(service_.report_count(), 1u);
}

TEST_F(HttpTest, LongPollWakesOnPublish) {
  HttpTransport http(url());
  FieldClient client(http, [](auto) {});
  client.subscribe("89", {Topic::village("BanSangkalok")});
  std::thread publisher([&] {
    std::this_thread::sleep_for(100ms);
    service_.submit_report(test::sangkalok_flood(), "k");
  });
  auto start = std::chrono::steady_clock::now();
  auto msgs = client.poll("89", {}, 10000ms);
  publisher.join();
  EXPECT_EQ(msgs.size(), 1u);
  EXPECT_LT(std::chrono::steady_clock::now() - start, 5000ms);
}

TEST(Http, UnreachableServer) {
  int port;
  {
    AlertService s(test::north_regions(), test::north_actors());
    ApiRouter router(s);
    HttpServer server(router);
    port = server.bind("127.0.0.1", 0);
  }
  HttpTransport http("http://127.0.0.1:" + std::to_string(port), 2000ms);
  try {
    http.send(ApiRequest{"GET", "/directory", {}, {}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Unreachable);
  }
}

TEST(Http, BindFailureIsReported) {
  AlertService s(test::north_regions(), test::north_actors());
  ApiRouter router(s);
  HttpServer first(router);
  int port = first.bind("127.0.0.1", 0);
  HttpServer second(router);
  EXPECT_THROW(second.bind("127.0.0.1", port), Error);
}
