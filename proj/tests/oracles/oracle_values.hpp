// Generated by make_oracles.py; do not edit.
#pragma once
#include <complex>

namespace oracle
{
using C = std::complex<double>;

struct ThetaCase { C tau, theta2, theta3, theta4, eta, g2, g3; };
inline const ThetaCase theta_cases[] = {
    {{0.0, 1.0}, {9.1357913815611682141e-1, 0.0}, {1.0864348112133080146, 0.0}, {9.1357913815611682141e-1, 0.0}, {7.8539816339744830962e-1, 0.0}, {1.1817045008077115768e+1, 0.0}, {1.1896144024315131133e-50, 0.0}},
    {{2.999999999999999889e-1, 8.0000000000000004441e-1}, {1.0338378746739892793, 2.5504975817790012476e-1}, {1.0951545979853152789, 1.3101433659772317273e-1}, {9.047060820667069717e-1, -1.3111555846492848598e-1}, {8.6453448819668927502e-1, -1.2166681722329805336e-1}, {3.5691582414356370124, 1.1704698850740939834e+1}, {1.1451247115519996956e+1, -1.2038466791064256527e+1}},
    {{-6.9999999999999995559e-1, 4.500000000000000111e-1}, {1.2170875080091880195, -6.5334137166895794664e-1}, {7.0839677068468449142e-1, -3.9768647727983976761e-1}, {1.2802755689907262883, 3.8945645101721728875e-1}, {1.3373852200153794887, -9.8085008420202016899e-1}, {-6.7646719360544808808e+1, 6.854430366248861028e+1}, {1.5919203026619061971e+2, 6.5759880339807111167e+1}},
    {{2.5e-1, 2.5}, {2.7533961501408148236e-1, 5.4768497791774663157e-2}, {1.0005490022359044992, 5.4900223594992117495e-4}, {9.994509977640046568e-1, -5.4900223594992117495e-4}, {8.2246703342545811038e-1, -2.9747328667412248945e-6}, {8.1174242524353298331, 2.9359436593638354988e-4}, {4.4508758978631922452, -3.3806036205276487339e-4}},
    {{5.0e-1, 5.999999999999999778e-2}, {2.0222244173530836568e-1, 8.3763277982967731086e-2}, {2.0412498861115972183, 2.0412330185270330209}, {2.0412498861115972183, -2.0412330185270330209}, {-3.0935827435943035593e+1, -2.360622462479761512e-49}, {3.9146528956979269988e+4, 4.1980013095333615029e-46}, {-1.490589335292994658e+6, -2.3977205824825182081e-44}},
};

struct EllipticCase { C k, K, Kprime, E, Eprime; };
inline const EllipticCase elliptic_cases[] = {
    {{2.999999999999999889e-1, 2.000000000000000111e-1}, {1.5874937097217518699, 4.9612975927726485966e-2}, {2.4402511957729221171, -5.5008871003350014512e-1}, {1.5520996711145567487, -4.7977141824459489301e-2}, {1.0809541733706702199, 1.0396588415244681682e-1}},
    {{5.0e-1, 0.0}, {1.6857503548125960429, 0.0}, {2.1565156474996432354, 0.0}, {1.4674622093394271555, 0.0}, {1.2110560275684595248, 0.0}},
    {{8.0000000000000004441e-1, -1.0000000000000000555e-1}, {1.9431434586617694782, -1.7642976375344187676e-1}, {1.743004757160064033, 1.0266776555631036847e-1}, {1.2880037087407729159, 8.8065377035345795438e-2}, {1.4167351571639203695, -7.4003957180020902899e-2}},
    {{-4.000000000000000222e-1, 5.999999999999999778e-1}, {1.4679298489436188652, -1.4458636617623487396e-1}, {1.46973877375562075, -2.0876801934449188085}, {1.6596335043768667922, 1.7374626351189478956e-1}, {4.2581358115281467117e-1, -4.1439623169019614005e-3}},
    {{5.0000000000000002776e-2, 1.0000000000000000208e-2}, {1.5717398570588243163, 3.937618719172325158e-4}, {4.3644853514894929847, -1.9667136325927344647e-1}, {1.5698534983116744005, -3.9305301110423792242e-4}, {1.0047367043832539035, 1.6971143585890275877e-3}},
};

struct HypCase { C a, b, c, s, value; };
inline const HypCase hyp_cases[] = {
    {{5.0e-1, 0.0}, {5.0e-1, 0.0}, {1.0, 0.0}, {2.999999999999999889e-1, 0.0}, {1.0910959103627815623, 0.0}},
    {{1.6666666666666666667e-1, 0.0}, {3.3333333333333333333e-1, 0.0}, {5.0e-1, 0.0}, {9.000000000000000222e-1, 1.0000000000000000555e-1}, {1.2229199669401267697, 9.1570302940463920908e-2}},
    {{2.5e-1, 0.0}, {7.5e-1, 0.0}, {1.5, 0.0}, {-2.0, 0.0}, {8.5559967716735219297e-1, 0.0}},
    {{3.3333333333333333333e-1, 0.0}, {6.6666666666666666667e-1, 0.0}, {1.0, 0.0}, {7.5e-1, 5.0e-1}, {1.1204553216537323041, 2.6230285345652927405e-1}},
    {{5.0e-1, 0.0}, {5.0e-1, 0.0}, {1.0, 0.0}, {2.0, 2.999999999999999889e-1}, {8.5316011289418254252e-1, 7.4355879272491643219e-1}},
    {{1.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}, {5.0e-1, 0.0}, {1.3862943611198906188, 0.0}},
    {{5.0e-1, 0.0}, {5.0e-1, 0.0}, {1.0, 0.0}, {9.4999999999999995559e-1, 0.0}, {1.8515049970729283522, 0.0}},
    {{2.000000000000000111e-1, 1.0000000000000000555e-1}, {6.9999999999999995559e-1, 0.0}, {1.3000000000000000444, -2.000000000000000111e-1}, {-5.999999999999999778e-1, 6.500000000000000222e-1}, {9.2017133103891077923e-1, 4.6141006704177427438e-3}},
    {{5.0e-1, 0.0}, {2.5e-1, 0.0}, {2.0, 0.0}, {-5.0, 1.0}, {8.5172983954797487714e-1, 1.636940900052364894e-2}},
};

struct CutCase { C a, b, c; double s; C above, below; };
inline const CutCase cut_cases[] = {
    {{5.0e-1, 0.0}, {5.0e-1, 0.0}, {1.0, 0.0}, 3.0, {6.3730565406830097605e-1, 7.4574918731632960996e-1}, {6.3730565406830097605e-1, -7.4574918731632960996e-1}},
    {{1.6666666666666666667e-1, 0.0}, {3.3333333333333333333e-1, 0.0}, {5.0e-1, 0.0}, 1.7, {1.0234398591236811284, 3.6177431803818958619e-1}, {1.0234398591236811284, -3.6177431803818958619e-1}},
};

struct GammaCase { C z, gamma; };
inline const GammaCase gamma_cases[] = {
    {{2.999999999999999889e-1, 4.000000000000000222e-1}, {9.1156152780458583312e-1, -1.3671933575854186231}},
    {{-2.5, 0.0}, {-9.4530872048294188123e-1, 0.0}},
    {{5.5, -3.0}, {6.2430185174211032798, 2.1474963762080636248e+1}},
    {{-6.9999999999999995559e-1, 1.1999999999999999556}, {-2.5840705582833882622e-1, 6.1507886764402914366e-2}},
    {{1.2e+1, 5.0e-1}, {1.3513893535872179484e+7, 3.7101122066498842919e+7}},
};

struct LegendreCase { C nu, mu, z, P, Q; };
inline const LegendreCase legendre_cases[] = {
    {{5.0e-1, 0.0}, {3.3333333333333333333e-1, 0.0}, {2.0, 5.0e-1}, {1.3111072979665517962, 1.1724073983321117179e-1}, {1.8097421461529042944e-1, 1.2779464358678213811e-1}},
    {{1.6666666666666666667e-1, 0.0}, {-1.6666666666666666667e-1, 0.0}, {1.5, 2.000000000000000111e-1}, {9.8394114687204167707e-1, 3.7763850237502228736e-2}, {4.8120472640110684196e-1, -4.4617559237420495887e-1}},
    {{-5.0e-1, 0.0}, {2.5e-1, 0.0}, {3.0, -1.0}, {6.8529475723439696966e-1, 7.6950651007765021057e-2}, {5.0397037919796811985e-1, 7.1898339748397445085e-1}},
    {{3.3333333333333333333e-1, 0.0}, {5.0e-1, 0.0}, {-2.0, 6.9999999999999995559e-1}, {4.6268555742758699177e-1, 7.8932152366032850098e-1}, {-1.401218630796093307e-1, -2.4276787251721832793e-1}},
};

struct CanonicalCase { C x, y, z, u, J1, J2; };
inline const CanonicalCase canonical_cases[] = {
    {{6.9999999999999995559e-1, 2.000000000000000111e-1}, {1.1000000000000000888, -2.999999999999999889e-1}, {4.000000000000000222e-1, 5.0e-1}, {-2.999999999999999889e-1, 2.000000000000000111e-1}, {1.3460014360208294835, -4.4262792871294857743e-1}, {-2.0446015046546264707, -4.9068789107775698138e-1}},
    {{1.0, 0.0}, {2.0, 0.0}, {1.0, 0.0}, {0.0, 0.0}, {2.9046470141924767827, 0.0}, {-1.8750470466616490602, 0.0}},
    {{2.999999999999999889e-1, -1.0000000000000000555e-1}, {9.000000000000000222e-1, 4.000000000000000222e-1}, {-2.000000000000000111e-1, 2.999999999999999889e-1}, {5.0e-1, 5.0e-1}, {2.4744868598716904514, 1.042612425129594281}, {2.1930014964860031407, -2.3834075665985870746}},
};

} // namespace oracle
