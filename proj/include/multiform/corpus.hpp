// The bundled hierarchy corpus, embedded so the tool and the test suites are
// self-contained.  `corpus export` writes these files out verbatim.

#ifndef MULTIFORM_CORPUS_HPP
#define MULTIFORM_CORPUS_HPP

#include <map>
#include <string>

namespace multiform::corpus {

inline const char* pkdv123 = R"MF(# potential KdV hierarchy, times 1,2,3
hierarchy pkdv123;
directions x1 x2 x3;
field v;

L[1,2] = v[1]*v[2];
L[2,3] = -3*v[1]^2*v[2] - v[1]*v[1,1,2] + v[1,1]*v[1,2] - v[1,1,1]*v[2];
L[1,3] = -2*v[1]^3 - v[1]*v[1,1,1] + v[1]*v[3];
)MF";

inline const char* pkdv135 = R"MF(# potential KdV hierarchy, odd times 1,3,5
hierarchy pkdv135;
directions x1 x3 x5;
field v;

L[1,3] = -2*v[1]^3 + v[1]*v[3] - v[1]*v[1,1,1];
L[1,5] = -5*v[1]^4 + 10*v[1]*v[1,1]^2 + v[1]*v[5] - v[1,1,1]^2;
L[3,5] = 6*v[1]^5 - 10*v[1]^3*v[3] + 20*v[1]^3*v[1,1,1] - 15*v[1]^2*v[1,1]^2
       + 3*v[1]^2*v[5] + 3*v[1]^2*v[1,1,1,1,1] - 10*v[1]*v[3]*v[1,1,1]
       + 20*v[1]*v[1,1]*v[1,3] - 12*v[1]*v[1,1]*v[1,1,1,1] + 6*v[1]*v[1,1,1]^2
       - 5*v[3]*v[1,1]^2 + 7*v[1,1]^2*v[1,1,1] + v[1]*v[1,1,5]
       - v[3]*v[1,1,1,1,1] + v[5]*v[1,1,1] - v[1,1]*v[1,5]
       + 2*v[1,3]*v[1,1,1,1] - 2*v[1,1,1]*v[1,1,3] + v[1,1,1]*v[1,1,1,1,1]
       - v[1,1,1,1]^2;
)MF";

inline const char* sg123 = R"MF(# sine-Gordon hierarchy in light-cone coordinates, times 1,2,3
hierarchy sg123;
directions x1 x2 x3;
field u;

L[1,2] = 1/2*u[1]*u[2] - cos(u);
L[1,3] = 1/2*u[1]*u[3] + 1/2*u[1,1]^2 - 1/8*u[1]^4;
L[2,3] = -1/2*u[2]*u[3] + u[1,1]*u[1,2] - u[1,1]*sin(u) + 1/2*u[1]^2*cos(u);

# gauge choice for Omega^(1): the light-cone representative without u[3]
omega1[1] = -1/2*u[1] * del u;
omega1[2] = 1/2*u[2] * del u;
omega1[3] = -(1/2*u[1,1,1] + 1/4*u[1]^3) * del u + u[1,1] * del u[1];
)MF";

inline const char* akns1234 = R"MF(# AKNS hierarchy, times 1,2,3,4
hierarchy akns1234;
directions x1 x2 x3 x4;
fields q, r;

L[1,2] = 1/2*(r*q[2] - q*r[2]) + i/2*q[1]*r[1] + i/2*q^2*r^2;

L[1,3] = 1/2*(r*q[3] - q*r[3]) - 1/8*(r[1]*q[1,1] - q[1]*r[1,1])
       - 3/8*q*r*(r*q[1] - q*r[1]);

L[1,4] = 1/2*(r*q[4] - q*r[4]) - 5*i/16*q*r*(q*r[1,1] + r*q[1,1])
       - 3*i/16*(q^2*r[1]^2 + q[1]^2*r^2) - i/4*q*r*q[1]*r[1]
       + i/8*q[1,1]*r[1,1] + i/4*q^3*r^3;

L[2,3] = 1/4*(q[2]*r[1,1] - r[2]*q[1,1]) - i/2*(q[3]*r[1] + r[3]*q[1])
       + 1/8*(q[1]*r[1,2] - r[1]*q[1,2]) + 3/8*q*r*(q*r[2] - r*q[2])
       - i/8*q[1,1]*r[1,1] + i/4*q*r*(q*r[1,1] + r*q[1,1])
       - i/8*(q*r[1] - r*q[1])^2 - i/2*q^3*r^3;

L[2,4] = 3/8*q^2*r^2*(r*q[1] - q*r[1]) - i/16*(q^2*r[1]*r[2] + r^2*q[1]*q[2])
       - 5*i/16*q*r*(q*r[1,2] + r*q[1,2]) - 1/8*q*r*(r*q[1,1,1] - q*r[1,1,1])
       - 1/8*(q^2*r[1]*r[1,1] - r^2*q[1]*q[1,1]) - 1/8*q[1]*r[1]*(r*q[1] - q*r[1])
       + 1/4*q*r*(r[1]*q[1,1] - q[1]*r[1,1]) + 3*i/8*q*r*(q[1]*r[2] + r[1]*q[2])
       - i/8*(q[1,1,1]*r[2] + r[1,1,1]*q[2]) + 1/16*(q[1,1,1]*r[1,1] - r[1,1,1]*q[1,1])
       + i/8*(q[1,1]*r[1,2] + r[1,1]*q[1,2]) - i/2*(q[1]*r[4] + r[1]*q[4]);

L[3,4] = i/8*(q[1,1]*r[1,3] + r[1,1]*q[1,3]) - i/8*(q[1,1,1]*r[3] + r[1,1,1]*q[3])
       - i/32*q[1,1,1]*r[1,1,1] + i/32*(q^2*r[1,1]^2 + r^2*q[1,1]^2)
       + i/32*q[1]^2*r[1]^2 + 3/8*q*r*(r*q[4] - q*r[4]) + 9*i/32*q^4*r^4
       - 3*i/16*q^2*r^2*(q*r[1,1] + r*q[1,1]) - i/16*(q^2*r[1]*r[3] + r^2*q[1]*q[3])
       - 5*i/16*q*r*(q*r[1,3] + r*q[1,3]) + 1/4*(q[1,1]*r[4] - r[1,1]*q[4])
       + 3*i/16*q*r*(q[1]*r[1,1,1] + r[1]*q[1,1,1]) + i/16*q*r*q[1,1]*r[1,1]
       - i/16*q[1]*r[1]*(q*r[1,1] + r*q[1,1]) - 15*i/16*q^2*r^2*q[1]*r[1]
       + 3*i/8*q*r*(q[1]*r[3] + r[1]*q[3]) - 1/8*(q[1]*r[1,4] - r[1]*q[1,4]);
)MF";

inline const std::map<std::string, const char*>& files() {
    static const std::map<std::string, const char*> m{
        {"pkdv123.mf", pkdv123},
        {"pkdv135.mf", pkdv135},
        {"sg123.mf", sg123},
        {"akns1234.mf", akns1234},
    };
    return m;
}

} // namespace multiform::corpus

#endif
