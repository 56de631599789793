from mpmath import mp, mpf, sqrt, acos, pi, e, exp, log, cbrt, findroot, fabs
from fractions import Fraction as F
from math import comb, factorial
mp.dps=60
# series C=6
def series(C,N):
    import math
    L = F(1+int(math.isqrt(1+4*C)),2)
    d=[L,F(1)]
    for n in range(2,N):
        s=sum(comb(n,k)*d[k]*d[n-k] for k in range(1,n))
        d.append(s/((2*L)**n-2*L))
    return d
d=series(6,6); print(d)
a=[d[n]/factorial(n) for n in range(6)]; print(a)
print([x/factorial(i) for i,x in enumerate(series(2,13))][:6])
def p(a,th): return sum(mpf(c.numerator)/c.denominator*th**i for i,c in enumerate(a))
for n in (3,4,5):
    aa=a[:n+1]
    ths=[mpf(-2)+mpf(4)*i/999 for i in range(1000)]
    E=[fabs(sqrt(6+p(aa,t))-p(aa,t/6)) for t in ths]
    # simpson avg 
    N=128; h=mpf(4)/N
    fs=[fabs(sqrt(6+p(aa,-2+h*i))-p(aa,(-2+h*i)/6)) for i in range(N+1)]
    S=h/3*(fs[0]+fs[-1]+4*sum(fs[1:-1:2])+2*sum(fs[2:-1:2]))
    print(n, float(max(E)), float(S/4))
th=findroot(lambda t: p(a,t), -3.3); print("root",th)
# numeric limit sqrt(6+t) t0=0
t=mpf(0); L=3
for n in range(60):
    t=sqrt(6+t)
print("c60", (L-t)*6**60)
# kth root 3 3 n=30
t=mpf(0)
for n in range(30): t=cbrt(24+t)
print("kth n30", (3-t)*27**30)
t=mpf(0)
for n in range(40): t=cbrt(24+t)
print("kth n40", (3-t)*27**40)
print("sqrt2", sqrt(2))
print("pi", pi, "pi dd lo", pi-mpf(float(pi)))
for name,v in [("pi",pi),("pi2",pi/2),("ln2",log(2)),("e",e)]:
    hi=float(v); lo=float(v-mpf(hi)); print(name, repr(hi), repr(lo))
print("e2pi2/4", e**2*pi**2/4)
# currie C(1.5)
L=mpf(1.5); t=mpf(0)
for n in range(120): t=sqrt(L*L-L+t)
print("C(1.5)", sqrt((2*L)**121*(L-t)) )
