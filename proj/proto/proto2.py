import numpy as np
from proto1 import run_point, Phi

# Split B: sigma1_t = sigma2_t = sigma (per-component), as Fig.8 caption read via Rxiz19
import proto1

def run_point_B(mu_t, s_comp, eps=1e-4, n_paths=20000, dt=1e-3, seed=2):
    # reuse run_point but with sigma_t meaning sqrt(2)*s_comp so s1=s2=s_comp
    return proto1.run_point(mu_t, s_comp*np.sqrt(2.0), eps, n_paths, dt, seed)

pi4 = np.pi**0.25
print(f"{'mu_t':>7} {'PhiPrinted':>10} {'win_lo':>8} {'win_hi':>8} {'P1_hat':>8} {'in?':>4}")
for mu_t in [0.12, 0.05, 0.01, -0.09]:
    st = 0.1
    phi = Phi(-pi4*mu_t/st)
    se = np.sqrt(phi*(1-phi)/1000)
    p1, top, left, und = run_point_B(mu_t, st)
    ok = (phi-3*se) <= p1 <= (phi+3*se)
    print(f"{mu_t:7.3f} {phi:10.4f} {phi-3*se:8.4f} {phi+3*se:8.4f} {p1:8.4f} {'Y' if ok else 'N':>4}  top={100*top:5.1f}% undone={und}")
