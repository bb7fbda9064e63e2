import json

import pytest

from studyflow.analytics import DATASET_NAMES
from studyflow.store import (
    RunDescriptor,
    RunStore,
    UnknownInput,
    UnknownRun,
    content_digest,
    write_dataset_files,
)

SAMPLE_EXPORTS = {
    name: {"csv": f"{name}-csv".encode(), "json": f"{name}-json".encode()}
    for name in DATASET_NAMES
}


def test_content_digest_is_sha256_hex():
    digest = content_digest(b"abc")
    assert digest == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"


def test_put_input_is_content_addressed_and_idempotent(tmp_path):
    store = RunStore(tmp_path)
    d1 = store.put_input(b"hello")
    d2 = store.put_input(b"hello")
    assert d1 == d2 == content_digest(b"hello")
    assert store.has_input(d1)
    assert store.get_input(d1) == b"hello"
    assert len(list(store.inputs_dir.iterdir())) == 1


def test_get_unknown_input_raises(tmp_path):
    store = RunStore(tmp_path)
    assert not store.has_input("0" * 64)
    with pytest.raises(UnknownInput):
        store.get_input("0" * 64)


def test_run_lifecycle(tmp_path):
    store = RunStore(tmp_path)
    desc = store.create_run({"seed": 1}, {"students": "a" * 64, "curriculum": "b" * 64})
    assert desc.status == "pending"
    assert store.get_run(desc.run_id) is desc

    store.mark_running(desc.run_id)
    assert store.get_run(desc.run_id).status == "running"

    finished = store.finish_run(desc.run_id, SAMPLE_EXPORTS)
    assert finished.status == "done"
    assert finished.error is None
    for name in DATASET_NAMES:
        assert finished.datasets[name] == {"csv": f"{name}.csv", "json": f"{name}.json"}
        assert finished.digests[name]["csv"] == content_digest(SAMPLE_EXPORTS[name]["csv"])
        assert store.dataset_bytes(desc.run_id, name, "csv") == SAMPLE_EXPORTS[name]["csv"]
        assert store.dataset_bytes(desc.run_id, name, "json") == SAMPLE_EXPORTS[name]["json"]


def test_fail_run_records_the_message(tmp_path):
    store = RunStore(tmp_path)
    desc = store.create_run({}, {})
    store.fail_run(desc.run_id, "input error: no student rows")
    again = store.get_run(desc.run_id)
    assert again.status == "failed"
    assert "no student rows" in again.error


def test_unknown_run_raises(tmp_path):
    store = RunStore(tmp_path)
    assert store.get_run("missing") is None
    with pytest.raises(UnknownRun):
        store.mark_running("missing")
    with pytest.raises(UnknownRun):
        store.dataset_bytes("missing", "dropout", "csv")


def test_dataset_bytes_rejects_unknown_name_or_format(tmp_path):
    store = RunStore(tmp_path)
    desc = store.create_run({}, {})
    store.finish_run(desc.run_id, SAMPLE_EXPORTS)
    with pytest.raises(KeyError):
        store.dataset_bytes(desc.run_id, "grades", "csv")
    with pytest.raises(KeyError):
        store.dataset_bytes(desc.run_id, "dropout", "xml")


def test_restarted_store_serves_finished_runs(tmp_path):
    first = RunStore(tmp_path)
    desc = first.create_run({"seed": 9}, {"students": "a" * 64})
    first.finish_run(desc.run_id, SAMPLE_EXPORTS)
    digest = first.put_input(b"students-bytes")

    second = RunStore(tmp_path)
    reloaded = second.get_run(desc.run_id)
    assert reloaded is not None
    assert reloaded.status == "done"
    assert reloaded.params == {"seed": 9}
    assert second.dataset_bytes(desc.run_id, "occupancy", "json") == SAMPLE_EXPORTS["occupancy"]["json"]
    assert second.get_input(digest) == b"students-bytes"


def test_torn_manifest_is_skipped_on_reload(tmp_path):
    store = RunStore(tmp_path)
    good = store.create_run({}, {})
    bad_dir = store.runs_dir / "deadbeef"
    bad_dir.mkdir()
    (bad_dir / "manifest.json").write_text("{ not json")

    again = RunStore(tmp_path)
    assert again.get_run(good.run_id) is not None
    assert again.get_run("deadbeef") is None


def test_manifest_is_stable_json(tmp_path):
    store = RunStore(tmp_path)
    desc = store.create_run({"seed": 4}, {})
    raw = (store.run_dir(desc.run_id) / "manifest.json").read_text()
    payload = json.loads(raw)
    assert list(payload) == sorted(payload)
    assert payload["run_id"] == desc.run_id
    assert RunDescriptor.from_dict(payload) == desc


def test_descriptor_round_trip():
    desc = RunDescriptor(
        run_id="abc",
        params={"seed": 2},
        inputs={"students": "d" * 64},
        status="done",
        datasets={"dropout": {"csv": "dropout.csv"}},
        digests={"dropout": {"csv": "e" * 64}},
    )
    assert RunDescriptor.from_dict(desc.to_dict()) == desc


def test_write_dataset_files_single_format(tmp_path):
    filenames, digests = write_dataset_files(tmp_path / "out", {"dropout": {"csv": b"x"}})
    assert filenames == {"dropout": {"csv": "dropout.csv"}}
    assert (tmp_path / "out" / "dropout.csv").read_bytes() == b"x"
    assert digests["dropout"]["csv"] == content_digest(b"x")


def test_concurrent_run_creation_yields_distinct_ids(tmp_path):
    import threading

    store = RunStore(tmp_path)
    ids = []

    def create():
        ids.append(store.create_run({}, {}).run_id)

    threads = [threading.Thread(target=create) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert len(set(ids)) == 8
    assert all(store.get_run(run_id) for run_id in ids)
