import numpy as np

from powerbound.operator_lab import check_lemma21, check_theorem25, random_model


def run_load_test(iterations: int = 100):
    """
    Run a simple load test of the bound checks.

    Builds `iterations` random 3x3 models and checks the orbit and inverse
    bounds on each one.
    """
    rng = np.random.default_rng(0)
    for i in range(iterations):
        model = random_model(3, 4.0, rng)
        x = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        check_lemma21(model, x, 1000).model_dump()
        check_theorem25(model, 1000, 0.05, [0.3, 0.1], rng).model_dump()


if __name__ == "__main__":
    run_load_test()
