import pytest

from schemeplan.classmodel import ClassModelError, emit_casl, emit_modal, parse_class_model

from .conftest import GOLDEN, plan_path

STATION_AXIOM = ". forall s : Station . exists u : Unit . has(s, u)"
CONNECTOR_AXIOM = ". forall u : Unit . exists c1, c2 : Connector . not (c1 = c2) /\\ has(c1, u) /\\ has(c2, u)"


@pytest.fixture(scope="module")
def railnet():
    return parse_class_model(plan_path("railnet.cm").read_text())


def test_parse_railnet(railnet):
    assert "Net" in railnet.classes and "Connector" in railnet.classes
    assert ("Linear", "Unit") in railnet.generalisations
    assert len(railnet.relations) == 5


def test_empty_model():
    model = parse_class_model("")
    assert emit_modal(model)
    assert "sorts Time" in emit_casl(model)


def test_cyclic_generalisation_rejected():
    with pytest.raises(ClassModelError):
        parse_class_model("class A\nclass B\nextends A B\nextends B A\n")


def test_undeclared_class_rejected():
    with pytest.raises(ClassModelError):
        parse_class_model("class A\nassoc A [0..*] -- B [1..*]\n")


def test_parse_error_carries_line():
    with pytest.raises(ClassModelError) as err:
        parse_class_model("class A\nfrobnicate\n")
    assert err.value.line == 2


def test_bad_multiplicity_rejected():
    with pytest.raises(ClassModelError):
        parse_class_model("class A\nclass B\nassoc A [3..2] -- B [0..*]\n")


def test_station_unit_witness_axiom(railnet):
    assert STATION_AXIOM in emit_modal(railnet)
    assert STATION_AXIOM in emit_casl(railnet)


def test_connector_distinctness_axiom(railnet):
    assert CONNECTOR_AXIOM in emit_modal(railnet)
    assert CONNECTOR_AXIOM in emit_casl(railnet)


def test_flexible_symbols_lifted(railnet):
    modal = emit_modal(railnet)
    timed = emit_casl(railnet)
    assert "isClosedAt : Unit ->? Boolean" in modal
    assert "isClosedAt : Unit * Time ->? Boolean" in timed
    assert "id : Net ->? UID" in modal and "id : Net ->? UID" in timed


def test_casl_adds_time_sort(railnet):
    assert emit_casl(railnet).splitlines()[1].startswith("sorts Time,")


def test_diff_is_flexible_symbols_and_time_only(railnet):
    """Beyond section keywords, the two outputs differ exactly on the sorts
    line and the flexible symbol declarations."""
    keywords = {"rigid ops", "flexible ops", "ops", "rigid preds", "flexible preds", "preds"}
    modal = [l for l in emit_modal(railnet).splitlines() if l not in keywords]
    timed = [l for l in emit_casl(railnet).splitlines() if l not in keywords]
    changed = set(modal) ^ set(timed)
    flexible = {"     isClosedAt : Unit ->? Boolean", "     isClosedAt : Unit * Time ->? Boolean"}
    sorts = {l for l in changed if l.startswith("sorts ")}
    assert changed == flexible | sorts
    assert len(sorts) == 2  # the class list with and without Time


def test_lower_bound_witness_count():
    model = parse_class_model("class A\nclass B\nassoc A [0..*] -- B [3..*]\n")
    axiom = next(l for l in emit_modal(model).splitlines() if l.startswith(". forall a"))
    assert "exists b1, b2, b3 : B" in axiom
    assert axiom.count("not (") == 3  # 3*(3-1)/2 distinctness conjuncts


def test_upper_bound_collapse():
    model = parse_class_model("class A\nclass B\nassoc A [0..*] -- B [0..2]\n")
    axiom = next(l for l in emit_modal(model).splitlines() if l.startswith(". forall a"))
    assert "b1, b2, b3 : B" in axiom
    assert axiom.count("=>") == 1
    assert axiom.count(" = ") == 3  # collapse disjunction over the 3 pairs


def test_multiplicity_axioms_identical_across_targets(railnet):
    modal_axioms = [l for l in emit_modal(railnet).splitlines() if l.startswith(". forall")]
    timed_axioms = [l for l in emit_casl(railnet).splitlines() if l.startswith(". forall")]
    assert modal_axioms == timed_axioms


def test_dynamic_relation_lifted():
    model = parse_class_model("class Unit\nclass State\nassoc Unit [0..*] -- State [0..*] dynamic\n")
    assert "has : Unit * State" in emit_modal(model)
    assert "has : Unit * State * Time" in emit_casl(model)


def test_golden_outputs(railnet):
    assert emit_modal(railnet) == (GOLDEN / "railnet.mcasl").read_text()
    assert emit_casl(railnet) == (GOLDEN / "railnet.casl").read_text()


def test_isalive_note_present(railnet):
    assert "isAlive support axioms are not emitted" in emit_modal(railnet)
