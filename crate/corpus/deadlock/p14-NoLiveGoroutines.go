// pattern: P14 NoLiveGoroutines
// expected: deadlock
package main

import "fmt"

func main() {
	ch := make(chan int)
	go func() {
		fmt.Println(<-ch)
	}()
	go func() {
		fmt.Println(<-ch)
	}()
	<-ch
}
