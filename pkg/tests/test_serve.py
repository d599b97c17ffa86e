import json
import threading
import urllib.error
import urllib.request
from concurrent.futures import ThreadPoolExecutor

import pytest

from conftest import TABLES

from spurplan.serve import create_server


@pytest.fixture(scope="module")
def server_url():
    server = create_server("127.0.0.1", 0, TABLES)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    host, port = server.server_address
    yield f"http://{host}:{port}"
    server.shutdown()
    server.server_close()


def get(url: str):
    try:
        with urllib.request.urlopen(url) as response:
            return response.status, json.loads(response.read())
    except urllib.error.HTTPError as err:
        return err.code, json.loads(err.read())


def get_raw(url: str):
    with urllib.request.urlopen(url) as response:
        return response.status, response.read()


class TestTables:
    def test_lists_loaded_tables(self, server_url):
        status, doc = get(f"{server_url}/api/tables")
        assert status == 200
        ids = {t["id"] for t in doc}
        assert {"mca1-60", "ade-mh35"} <= ids
        mca = next(t for t in doc if t["id"] == "mca1-60")
        assert mca["mixer_id"] == "MCA1-60+"
        assert mca["max_rf_order"] == 10

    def test_empty_directory(self, tmp_path):
        server = create_server("127.0.0.1", 0, tmp_path)
        thread = threading.Thread(target=server.serve_forever, daemon=True)
        thread.start()
        try:
            host, port = server.server_address
            status, doc = get(f"http://{host}:{port}/api/tables")
            assert status == 200
            assert doc == []
        finally:
            server.shutdown()
            server.server_close()


class TestRegionsEndpoint:
    def test_first_stage_regions(self, server_url):
        status, doc = get(
            f"{server_url}/api/regions?table=mca1-60&rf_center=2900MHz"
            f"&rf_bw=400MHz&if_bw=30MHz&floor=70&injection=high")
        assert status == 200
        assert any(r["low_hz"] <= 1800e6 <= r["high_hz"] for r in doc["regions"])

    def test_missing_parameter(self, server_url):
        status, doc = get(f"{server_url}/api/regions?table=mca1-60")
        assert status == 400
        assert doc["field"] == "rf_center"
        assert "error" in doc

    def test_unknown_table(self, server_url):
        status, doc = get(
            f"{server_url}/api/regions?table=zz&rf_center=1GHz&rf_bw=1MHz&if_bw=1MHz")
        assert status == 400
        assert doc["field"] == "table"

    def test_concurrent_identical_requests(self, server_url):
        url = (f"{server_url}/api/regions?table=ade-mh35&rf_center=1800MHz"
               f"&rf_bw=30MHz&if_bw=5MHz&floor=70")
        with ThreadPoolExecutor(max_workers=8) as pool:
            bodies = list(pool.map(lambda _: get_raw(url)[1], range(16)))
        assert all(b == bodies[0] for b in bodies)


class TestChartEndpoint:
    def test_chart(self, server_url):
        status, doc = get(
            f"{server_url}/api/chart?table=ade-mh35&lo=1860MHz"
            f"&rf_lo=1785MHz&rf_hi=1815MHz")
        assert status == 200
        assert doc["lo_hz"] == 1860e6
        keys = {(l["m"], l["n"]) for l in doc["lines"]}
        assert (1, 1) in keys and (2, 2) in keys

    def test_max_order_zero_rejected(self, server_url):
        status, doc = get(
            f"{server_url}/api/chart?table=ade-mh35&lo=1860MHz"
            f"&rf_lo=1785MHz&rf_hi=1815MHz&max_order=0")
        assert status == 400
        assert doc["field"] == "max_order"

    def test_sums_flag(self, server_url):
        base = (f"{server_url}/api/chart?table=ade-mh35&lo=1860MHz"
                f"&rf_lo=1785MHz&rf_hi=1815MHz&all=1")
        _, without = get(base)
        _, with_sums = get(base + "&sums=1")
        assert len(with_sums["lines"]) > len(without["lines"])


class TestCascadeEndpoint:
    def test_post_chain(self, server_url):
        chain = {"stages": [
            {"name": "lna", "kind": "LNA", "gain_db": 21.7, "nf_db": 1.4,
             "oip3_dbm": 33.9, "op1db_dbm": 20.6, "band": [2700e6, 3100e6]},
            {"name": "amp", "kind": "Amplifier", "gain_db": 21.8, "nf_db": 2.7,
             "band": [2700e6, 3100e6]},
        ]}
        request = urllib.request.Request(
            f"{server_url}/api/cascade",
            data=json.dumps(chain).encode(),
            headers={"Content-Type": "application/json"},
            method="POST")
        with urllib.request.urlopen(request) as response:
            doc = json.loads(response.read())
        assert doc["gain_db"] == pytest.approx(43.5)
        assert doc["nf_db"] == pytest.approx(1.4182987, abs=1e-6)
        assert doc["no_oip3_stages"] == ["amp"]

    def test_bad_body(self, server_url):
        request = urllib.request.Request(
            f"{server_url}/api/cascade", data=b"{not json",
            headers={"Content-Type": "application/json"}, method="POST")
        with pytest.raises(urllib.error.HTTPError) as err:
            urllib.request.urlopen(request)
        assert err.value.code == 400
        assert json.loads(err.value.read())["field"] == "body"


class TestStatic:
    def test_info_page_without_frontend(self, server_url):
        status, body = get_raw(f"{server_url}/")
        assert status == 200
        assert b"spurplan" in body

    def test_unknown_path_404(self, server_url):
        with pytest.raises(urllib.error.HTTPError) as err:
            urllib.request.urlopen(f"{server_url}/nothing/here.js")
        assert err.value.code == 404

    def test_serves_frontend_files(self, tmp_path):
        (tmp_path / "tables").mkdir()
        front = tmp_path / "front"
        front.mkdir()
        (front / "index.html").write_text("<html>explorer</html>")
        (front / "app.js").write_text("console.log(1);")
        server = create_server("127.0.0.1", 0, tmp_path / "tables", front)
        thread = threading.Thread(target=server.serve_forever, daemon=True)
        thread.start()
        try:
            host, port = server.server_address
            status, body = get_raw(f"http://{host}:{port}/")
            assert status == 200 and b"explorer" in body
            status, body = get_raw(f"http://{host}:{port}/app.js")
            assert status == 200 and b"console" in body
            with pytest.raises(urllib.error.HTTPError) as err:
                urllib.request.urlopen(f"http://{host}:{port}/../secret")
            assert err.value.code in (400, 404)
        finally:
            server.shutdown()
            server.server_close()
