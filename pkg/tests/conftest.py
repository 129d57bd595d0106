import pytest

from ikl import InputAlphabet, KripkeStructure


@pytest.fixture
def ab():
    return InputAlphabet(("a", "b"))


@pytest.fixture
def parity(ab):
    """Two states over {a,b}: 'a' flips, 'b' stays; output = state parity."""
    return KripkeStructure(ab, 0, ((1, 0), (0, 1)), ((0,), (1,)))


@pytest.fixture
def parity4(ab):
    """Four states counting 'a' mod 4, output = count mod 2 (unminimised
    realisation of the parity language)."""
    return KripkeStructure(ab, 0,
                           ((1, 0), (2, 1), (3, 2), (0, 3)),
                           ((0,), (1,), (0,), (1,)))


@pytest.fixture(params=["compiled", "pure"])
def kernel_mode(request, monkeypatch):
    """Run a test under both kernel implementations (skips the compiled run
    when the extension is unavailable)."""
    from ikl import _kernels
    if request.param == "compiled":
        if _kernels.speedups is None:
            pytest.skip("compiled kernels unavailable")
    else:
        monkeypatch.setattr(_kernels, "speedups", None)
    return request.param
