"""Angles, itineraries, and orbits under the d-tupling map.

The rabbit triangle's vertices form one period-3 orbit of the doubling
map; in base 2 they are the rotations of the repeating word 001.
"""

from fractions import Fraction as F

from lamkit import format_itinerary, orbit_info, parse_angle, preimages, sigma

print("base-2 itineraries of the rabbit orbit")
theta = parse_angle("_001", 2)
for _ in range(4):
    info = orbit_info(theta, 2)
    print(f"  {str(theta):>5}  = {format_itinerary(theta, 2):>6}   "
          f"preperiod {info.preperiod}, period {info.period}")
    theta = sigma(theta, 2)

print()
print("a strictly preperiodic angle")
theta = parse_angle("0010_001", 2)
print(f"  0010_001 = {theta}")
orbit = [theta]
for _ in range(6):
    orbit.append(sigma(orbit[-1], 2))
print("  orbit:", " -> ".join(str(t) for t in orbit))

print()
print("preimages are evenly spaced")
for d in (2, 3):
    pts = preimages(F(1, 7), d)
    print(f"  sigma_{d}^-1(1/7) = {[str(p) for p in pts]}")

print()
print("degree-3 itineraries")
for text in ("_112", "_121", "_211"):
    print(f"  {text} = {parse_angle(text, 3)}")
