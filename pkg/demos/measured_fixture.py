"""Both routes for the weakly coupled measured fixture.

Run: python demos/measured_fixture.py

The identified model is scaled to unit mass and unit grounding stiffness,
analysed, and scaled back to rad/s and s. Ring-down records synthesized
from the same model are then pushed through the peak-envelope route.
"""

from coupled_tbp.ingest import bundled_config, load_rom, synthesize_channels, table1_pipeline

rom = load_rom(bundled_config("rom_weak.cfg"))
print(f"omega_n={rom.omega_n:.2f} rad/s  lambda1={rom.lambda1:.4f}  lambda2={rom.lambda2:.4f}  "
      f"beta={rom.beta:.4f}  gamma={rom.gamma:.3f}")
for case in (1, 2):
    res = table1_pipeline(rom, case, channels=synthesize_channels(rom, case))
    for row in res.rows():
        print("case {} {:>12}: bandwidth={:.4f} rad/s  storage={:.4f} s  TBP={:.4f}".format(
            row[0], row[2], *row[3:]))
