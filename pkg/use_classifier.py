from dotenv import load_dotenv

from algebra_core import EXACT
from classifier_cli import classify_algebra, render_brackets, write_algebra
from families import FAMILIES, Mode, build, conditions, params_from_text, sample, subfamily
from gray_hervella import project_fine, WTensor
from hermitian import AlmostComplexJ, nabla_omega

# Picks up LIECLASS_TOLERANCE if you keep one in .env
load_dotenv()

# The Kahler example of g3: alpha = 1, theta2 = -2 alpha
params = params_from_text("g3", "alpha=1,beta=0,w1=0,w2=0,theta2=-2")
L = build("g3", params)
print("g3 brackets:")
for line in render_brackets(L):
    print(f"  {line}")
print(f"condition verdict: {conditions('g3', params)}")

# Full classification report (three routes side by side)
result = classify_algebra(L)
print("\nRoutes:")
for route, verdict in result.routes.items():
    print(f"  {route:14s} AK={verdict.ak} I={verdict.i} K={verdict.k}")
print(f"Vertical sectional curvature: {result.k_vertical}")
print(f"Family matches: {[fid for fid, _ in result.family_matches]}")

# Gray-Hervella components of nabla omega for a non-Kahler g5 sample
g5 = sample("g5", seed=7)
decomposition = project_fine(WTensor.from_nabla_omega(
    nabla_omega(build("g5", g5), AlmostComplexJ.adapted(EXACT))))
print(f"\ng5 sample {g5.formatted()}")
print(f"|W1|^2..|W4|^2 = {[str(n) for n in decomposition.norms]}")

# Solve the almost Kahler condition of g4 for w1
g4 = subfamily("g4", Mode.AK, params_from_text("g4", "lam=1,z2=2,w1=0,w2=3"))
print(f"\ng4 AK subfamily: {g4.formatted()}")

# One instance of each family, written out for `lieclass classify`
print("\nWriting one sample per family...")
for fid in FAMILIES:
    p = sample(fid, seed=0)
    write_algebra(f"{fid}.json", build(fid, p), {"name": fid, "family": fid,
                                                 "params": p.formatted()})
    print(f"  {fid}.json  {p.formatted()}")
