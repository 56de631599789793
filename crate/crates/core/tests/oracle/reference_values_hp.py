from mpmath import mp, mpf, sqrt, cbrt, pi, acos, cos, log, exp, e
mp.dps=300
t=mpf(0)
for n in range(1,61):
    t=cbrt(24+t)
    if n in (10,20,30,60): print("kth",n,mp.nstr((3-t)*mpf(27)**n,40))
for L in (mpf(1.5),mpf(2),mpf(1.25),mpf(3),mpf(10)):
    t=mpf(0)
    for n in range(150): t=sqrt(L*L-L+t)
    print("C",L, mp.nstr(sqrt((2*L)**151*(L-t)),40) if False else mp.nstr(sqrt((2*L)**150*(L-t)*2*L),40))
# rational demo limit t0=4
# log shift L=1, t0=0
L=mpf(1); t=mpf(0); m=exp(-L)
for n in range(200): t=log(exp(L)-L+t)
print("logshift", mp.nstr((L-t)/m**200,40))
# golden fib n=10
phi=(1+sqrt(5))/2
F=[0,1]
for i in range(100): F.append(F[-1]+F[-2])
for n in (1,10,25,80): print("fib",n, mp.nstr(phi**(2*n)*abs(phi-mpf(F[n+1])/F[n]),30), mp.nstr(sqrt(5),30))
# cheb K=3 t0=-1 etc
