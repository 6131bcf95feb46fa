from fractions import Fraction as F

import pytest

from nullseq import NullSeq, T, nu_embed
from nullseq import certio
from nullseq.duality import Character, CharacterBox, gclosed_separator, schur_witness
from nullseq.monothetic import approximate_target, build_generator, joint_density
from nullseq.separation import compactness_check, dichotomy


def _artifacts():
    trace = build_generator(2)
    third = T(F(1, 3))
    ys = [nu_embed(n, third) for n in range(1, 6)]
    return {
        "trace": trace,
        "density": joint_density((F(1, 3), F(1, 5)), 7, F(1, 2)),
        "mesh": joint_density((F(1, 3), F(1, 5)), 7, F(1, 2), method="mesh-grid"),
        "cover": dichotomy([T(F(k, 20)) for k in range(20)], F(1, 4), 10),
        "discrete": dichotomy(ys, F(1, 3), 2),
        "witness-box": schur_witness(third, 8, CharacterBox.integer_range(T, 4, -2, 2)),
        "witness-list": schur_witness(third, 5, [Character(T, {2: 1})]),
        "separator": gclosed_separator(ys, F(1, 4), [[NullSeq(T, [F(1, 7)], 0)]]),
        "approximation": approximate_target(trace, NullSeq(T, [F(1, 2)], 0), F(2)),
        "sequence": NullSeq(T, [F(1, 3), F(1, 8)], F(1, 100)),
        "character": Character(T, {1: 2, 4: -1}),
        "compact": compactness_check([[T(F(1, 2 ** n))] for n in range(1, 6)], [F(1, 4)]),
    }


@pytest.mark.parametrize("name", list(_artifacts()))
def test_round_trip_is_byte_stable(name):
    obj = _artifacts()[name]
    text = certio.dumps(obj)
    back = certio.loads(text)
    assert certio.dumps(back) == text
    assert text.endswith("\n")


def test_timestamp_is_ignored(tmp_path):
    obj = NullSeq(T, [F(1, 2)], 0)
    path = tmp_path / "x.json"
    certio.save(obj, path, timestamp=True)
    assert "created" in path.read_text()
    assert certio.load(path) == obj


def test_unknown_artifact():
    with pytest.raises(ValueError):
        certio.loads('{"kind": "mystery"}')


def test_density_flag_must_agree():
    data = certio.to_data(joint_density((F(1, 3),), 1, F(1, 10)))
    data["holds"] = True
    with pytest.raises(ValueError):
        certio.from_data(data)
