from memory_profiler import profile
import numpy as np

from powerbound.operator_lab import power_norm_profile, random_model


@profile
def memory_test():
    rng = np.random.default_rng(1)

    for d in (4, 8, 16, 32):
        model = random_model(d, 10.0, rng)
        power_norm_profile(model, 10000, "forward")
        power_norm_profile(model, 10000, "backward")


if __name__ == "__main__":
    memory_test()
