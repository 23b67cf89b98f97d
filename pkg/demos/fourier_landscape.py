"""
The Fourier potential and how the game reshapes it
==================================================

v(omega) = |sum_i y_i alpha_i exp(i <omega, x_i>)|^2 is what the kernel player
maximizes. With uniform alpha its peaks show which frequencies separate the
classes. After boosting, alpha concentrates on the hard points and the landscape
changes.
"""

import numpy as np

from marginkernel import LangevinParams, boost, gen_windmill, potential_batch

data = gen_windmill(600, seed=3)
axis = np.linspace(-12, 12, 49)
w1, w2 = np.meshgrid(axis, axis, indexing="ij")
grid = np.column_stack([w1.ravel(), w2.ravel()])

SHADES = " .:-=+*#%@"


def show(values, title):
    img = values.reshape(w1.shape)
    img = img / img.max()
    print(title)
    for row in img[::2, ::1]:
        print("".join(SHADES[min(int(v * len(SHADES)), len(SHADES) - 1)] for v in row))
    k = np.argmax(values)
    print("peak at omega =", np.round(grid[k], 2), "\n")


uniform, _ = potential_batch(data, np.ones(data.n), grid)
# the origin only measures class imbalance
print("v(0) =", uniform[len(grid) // 2], "= (sum y)^2 =", data.labels.sum() ** 2)
show(uniform, "uniform alpha")

# %%
kernel, _ = boost(data, T=60, params=LangevinParams(chains=100, top_k=10), step_multiplier=4.0)
late, _ = potential_batch(data, np.clip(kernel.alpha, 0, None), grid)
show(late, "alpha after 60 rounds")
